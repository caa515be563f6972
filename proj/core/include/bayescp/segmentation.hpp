#pragma once

#include <compare>
#include <cstddef>
#include <utility>
#include <vector>

namespace bayescp {

// Changepoints c_1 < ... < c_k = n, each the last position (1-based) of
// its segment. Segment t covers positions c_{t-1}+1 .. c_t with c_0 = 0.
struct Segmentation {
  std::vector<std::size_t> changepoints;

  std::size_t num_segments() const noexcept { return changepoints.size(); }

  // Half-open index range [begin, end) of segment t (0-based).
  std::pair<std::size_t, std::size_t> segment(std::size_t t) const {
    return {t == 0 ? 0 : changepoints[t - 1], changepoints[t]};
  }

  std::vector<std::size_t> segment_lengths() const;

  // True when changepoints are strictly increasing, start at >= 1 and end
  // at n, and every segment length lies in [min_length, max_length].
  bool is_valid(std::size_t n, std::size_t min_length = 1, std::size_t max_length = 0) const;

  friend auto operator<=>(const Segmentation&, const Segmentation&) = default;
};

}  // namespace bayescp
