#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bayescp/segmentation.hpp"

namespace bayescp {

// Admissible segment lengths [min_length, max_length]. A max_length of 0
// means "no upper bound" (n).
struct LengthBounds {
  std::size_t min_length = 1;
  std::size_t max_length = 0;
};

// Prior over segmentations of 1..n: p(k) = 1/k_max and, given k, uniform
// over the S(n, k) admissible segmentations. S is held in log space with
// kLogZero for an empty count.
class SegPrior {
 public:
  std::size_t n() const noexcept { return n_; }
  std::size_t k_max() const noexcept { return k_max_; }
  std::size_t min_length() const noexcept { return min_length_; }
  std::size_t max_length() const noexcept { return max_length_; }
  bool bounded() const noexcept { return min_length_ > 1 || max_length_ < n_; }

  bool admits_length(std::size_t length) const noexcept {
    return length >= min_length_ && length <= max_length_;
  }

  // log S(i, k) for 0 <= i <= n and 1 <= k <= k_max.
  double log_count(std::size_t i, std::size_t k) const;

 private:
  friend SegPrior build_seg_prior(std::size_t, std::size_t, std::optional<LengthBounds>);

  std::size_t n_ = 0;
  std::size_t k_max_ = 0;
  std::size_t min_length_ = 1;
  std::size_t max_length_ = 0;
  std::vector<double> log_counts_;  // row k-1, column i
};

// Throws ConfigError unless 1 <= k_max <= n and 1 <= l <= u <= n.
SegPrior build_seg_prior(std::size_t n, std::size_t k_max,
                         std::optional<LengthBounds> bounds = std::nullopt);

// -log k_max; DomainError when k is outside 1..k_max.
double log_prior_num_segments(const SegPrior& prior, std::size_t k);

// log p(A) = -log k_max - log S(n, |A|) for admissible A, kLogZero otherwise.
double log_prior_segmentation(const SegPrior& prior, const Segmentation& a);

namespace detail {

// S(i, k) by summing over the length of the last segment,
// S(i, k) = sum_{L=l..u} S(i-L, k-1). Used for bounded priors; exposed so
// tests can compare it with the binomial path.
std::vector<double> log_counts_by_last_segment(std::size_t n, std::size_t k_max,
                                               std::size_t min_length, std::size_t max_length);

}  // namespace detail

}  // namespace bayescp
