#include "bayescp/sequence.hpp"

#include <algorithm>

#include "bayescp/errors.hpp"

namespace bayescp {

ObservedSequence::ObservedSequence(Track track) {
  tracks_.push_back(std::move(track));
  if (tracks_.front().empty()) throw DomainError("sequence must contain at least one position");
  for (double y : tracks_.front()) {
    if (std::isinf(y)) throw DomainError("observations must be finite or missing");
  }
}

ObservedSequence::ObservedSequence(std::vector<Track> tracks) : tracks_(std::move(tracks)) {
  if (tracks_.empty()) throw DomainError("sequence must contain at least one track");
  const std::size_t n = tracks_.front().size();
  if (n == 0) throw DomainError("sequence must contain at least one position");
  for (const auto& t : tracks_) {
    if (t.size() != n) throw DomainError("all replica tracks must have the same length");
    for (double y : t) {
      if (std::isinf(y)) throw DomainError("observations must be finite or missing");
    }
  }
}

std::size_t ObservedSequence::observed_count(std::size_t r) const {
  const auto& t = tracks_.at(r);
  return static_cast<std::size_t>(
      std::count_if(t.begin(), t.end(), [](double y) { return !is_missing(y); }));
}

ObservedSequence ObservedSequence::slice(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > size()) throw WindowError("slice outside the sequence");
  std::vector<Track> out;
  out.reserve(tracks_.size());
  for (const auto& t : tracks_) {
    out.emplace_back(t.begin() + static_cast<std::ptrdiff_t>(begin),
                     t.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return ObservedSequence(std::move(out));
}

ObservedSequence concatenate(std::span<const ObservedSequence> parts) {
  if (parts.empty()) throw DomainError("nothing to concatenate");
  const std::size_t tracks = parts.front().num_tracks();
  std::vector<Track> out(tracks);
  for (const auto& part : parts) {
    if (part.num_tracks() != tracks)
      throw DomainError("concatenated sequences must have the same number of tracks");
    for (std::size_t r = 0; r < tracks; ++r) {
      const auto src = part.track(r);
      out[r].insert(out[r].end(), src.begin(), src.end());
    }
  }
  return ObservedSequence(std::move(out));
}

}  // namespace bayescp
