#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bayescp/hyperparams.hpp"
#include "bayescp/segmentation.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

enum class Scenario {
  // Segmentation uniform given k, segment (mu, sigma^2) from the
  // normal-inverse-chi^2 prior, iid normal observations.
  kHierarchical,
  // N(0, sd^2) on 1..n/2, N(jump_mean, sd^2) on n/2+1..n.
  kSingleChangepoint,
  // N(-1,1) x 100, N(-0.6,1) x 50, N(1,1) x 100, with gap_length missing
  // positions inserted after position 100.
  kGapStudy,
};

// Inclusive 1-based range of positions to mark missing.
struct Gap {
  std::size_t first = 1;
  std::size_t last = 1;
};

struct SimSpec {
  Scenario scenario = Scenario::kHierarchical;
  std::size_t n = 100;             // ignored by kGapStudy
  std::optional<std::size_t> k;    // fixed number of segments
  std::size_t k_max = 1;           // k ~ Uniform{1..k_max} when k is unset
  Hyperparams theta;               // kHierarchical only
  double jump_mean = 1.0;          // kSingleChangepoint
  double noise_sd = 1.0;           // kSingleChangepoint
  std::size_t gap_length = 100;    // kGapStudy
  std::vector<Gap> gaps;           // applied after generation, any scenario
  std::uint64_t seed = 1;
};

struct SegmentParams {
  double mean = 0.0;
  double variance = 0.0;
};

struct SimResult {
  ObservedSequence data;
  Segmentation truth;
  std::vector<SegmentParams> segment_params;
};

// Deterministic given spec.seed. Throws ConfigError for an infeasible k,
// gaps outside 1..n or overlapping gaps.
SimResult simulate(const SimSpec& spec);

}  // namespace bayescp
