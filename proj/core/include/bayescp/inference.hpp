#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bayescp/evidence.hpp"
#include "bayescp/evidence_kernel.hpp"
#include "bayescp/forward.hpp"
#include "bayescp/segmentation.hpp"

namespace bayescp {

// Independent exact draws from p(A | y).
struct SampleSet {
  std::vector<Segmentation> samples;
  std::uint64_t seed = 0;
};

// Draws k from p(k | y), sets c_k = n and then samples each earlier
// changepoint backwards from
//   p(c_{t-1} = j | c_t = i) ∝ exp(lp_hat(j, t-1) + log_seg1(j, i)).
// Sample s uses its own generator seeded from (seed, s), so the result is
// a pure function of (table, count, seed).
SampleSet sample_segmentations(const ForwardTable& table, std::size_t count, std::uint64_t seed);

struct MapResult {
  Segmentation segmentation;
  double log_posterior = 0.0;  // log p(A | y) of the returned A
};

// Exact argmax of p(A | y) by max-product recursion and backtracing. Ties
// go to the smallest number of segments, then to the smallest changepoint
// positions compared from the last changepoint backwards.
MapResult map_segmentation(const ForwardTable& table);

// Best segmentation with exactly k segments, same tie rule. log_posterior
// is still the unconditional log p(A | y). Throws ConfigError for k outside
// 1..k_max and ModelError when no such segmentation is admissible.
MapResult map_segmentation(const ForwardTable& table, std::size_t k);

// argmax_k p(k | y); the smallest k on ties.
std::size_t modal_num_segments(const ForwardTable& table);

// Fraction of samples with a changepoint at each position 1..n-1 (index
// p-1 holds position p). Position n is always a changepoint and omitted.
std::vector<double> changepoint_marginals(const SampleSet& samples, std::size_t n);

// The same probabilities computed exactly with a suffix recursion that
// mirrors the forward table.
std::vector<double> exact_changepoint_marginals(const ForwardTable& table);

// Posterior (mu, sigma^2) of every segment of `a` on one track.
std::vector<PosteriorParams> segment_posteriors(const Segmentation& a,
                                                const EvidenceKernel& kernel,
                                                std::size_t track = 0);

// Mean of the per-position posterior mixture over samples: for each
// position, the average over samples of the posterior mean of mu (and of
// sigma^2) for the segment containing it. mean_sigma_sq is empty at
// positions where some component has nu_n <= 2 (undefined mean).
struct PositionSummary {
  std::vector<double> mean_mu;
  std::vector<std::optional<double>> mean_sigma_sq;
};

// Requires the iid normal variant and at least one sample.
PositionSummary posterior_position_summary(const SampleSet& samples,
                                           const EvidenceKernel& kernel,
                                           std::size_t track = 0);
PositionSummary posterior_position_summary(const SampleSet& samples,
                                           const ObservedSequence& seq,
                                           const Hyperparams& theta);

namespace detail {

// Index drawn from unnormalized log-weights by inverse CDF at u in [0, 1).
std::size_t draw_log_categorical(std::span<const double> log_weights, double u);

}  // namespace detail

}  // namespace bayescp
