#include "bayescp/segmentation.hpp"

namespace bayescp {

std::vector<std::size_t> Segmentation::segment_lengths() const {
  std::vector<std::size_t> lengths;
  lengths.reserve(changepoints.size());
  std::size_t prev = 0;
  for (std::size_t c : changepoints) {
    lengths.push_back(c - prev);
    prev = c;
  }
  return lengths;
}

bool Segmentation::is_valid(std::size_t n, std::size_t min_length, std::size_t max_length) const {
  if (changepoints.empty() || changepoints.back() != n) return false;
  if (max_length == 0) max_length = n;
  std::size_t prev = 0;
  for (std::size_t c : changepoints) {
    if (c <= prev) return false;
    const std::size_t len = c - prev;
    if (len < min_length || len > max_length) return false;
    prev = c;
  }
  return true;
}

}  // namespace bayescp
