#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace bayescp {

// Missing observations are stored as quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double value) noexcept { return std::isnan(value); }

using Track = std::vector<double>;

// One or more equally long tracks observed at positions 1..n. Additional
// tracks are replicas sharing the same underlying segmentation.
//
// Tracks may be entirely missing; the ingest layer is responsible for
// rejecting such input when it comes from a user.
class ObservedSequence {
 public:
  explicit ObservedSequence(Track track);
  explicit ObservedSequence(std::vector<Track> tracks);

  std::size_t size() const noexcept { return tracks_.front().size(); }
  std::size_t num_tracks() const noexcept { return tracks_.size(); }

  std::span<const double> track(std::size_t r) const { return tracks_.at(r); }
  const std::vector<Track>& tracks() const noexcept { return tracks_; }

  std::size_t observed_count(std::size_t r) const;

  // Positions begin+1..end of every track, as a new sequence.
  ObservedSequence slice(std::size_t begin, std::size_t end) const;

 private:
  std::vector<Track> tracks_;
};

// Appends sequences end to end. All parts must have the same track count.
ObservedSequence concatenate(std::span<const ObservedSequence> parts);

}  // namespace bayescp
