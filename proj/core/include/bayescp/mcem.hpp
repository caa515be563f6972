#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayescp/evidence.hpp"
#include "bayescp/forward.hpp"
#include "bayescp/hyperparams.hpp"
#include "bayescp/seg_prior.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

struct McemConfig {
  std::size_t iterations = 10;
  std::size_t samples_per_sequence = 100;
  std::size_t k_max = 20;  // capped at each sequence's length
  std::optional<LengthBounds> bounds;
  double optimizer_tolerance = 1e-8;
  std::size_t max_evaluations = 500;
  // Relative change of the evidence trace below which iteration stops
  // early; 0 disables the rule.
  double stop_tolerance = 0.0;
  // A single training sequence with fewer observed values than this falls
  // back to default_hyperparams.
  std::size_t min_single_sequence_observations = 100;
  std::uint64_t seed = 1;

  // Throws ConfigError for zero iterations or samples.
  void validate() const;
};

enum class McemStatus {
  kCompleted,         // ran every iteration
  kStopped,           // evidence change fell below stop_tolerance
  kOptimizerWarning,  // some M-step hit max_evaluations before converging
  kFallbackDefault,   // too little data; returned default_hyperparams
};

std::string to_string(McemStatus status);

struct McemResult {
  Hyperparams theta;
  // sum over sequences of log p(y | theta) at the initial value and after
  // every iteration.
  std::vector<double> log_evidence_trace;
  // Monte Carlo standard error of each iteration's M-step objective at the
  // maximizer.
  std::vector<double> objective_stderr;
  McemStatus status = McemStatus::kCompleted;
  std::size_t iterations_run = 0;
};

// Segment statistics with a multiplicity, as collected by the E-step.
struct WeightedStats {
  SufficientStats stats;
  double weight = 1.0;
};

// sum_s log p(segment_s | 1, theta). The segmentation prior does not depend
// on theta and is left out.
double m_step_objective(const Hyperparams& theta, std::span<const SufficientStats> segments);
double m_step_objective(const Hyperparams& theta, std::span<const WeightedStats> segments);

// A segment [begin, end) of one track, with the fraction of E-step draws
// that contain it.
struct WeightedSegment {
  std::size_t track = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  double weight = 0.0;
};

struct EStepResult {
  std::vector<WeightedSegment> segments;  // distinct, ordered by (track, begin, end)
  std::vector<std::vector<std::size_t>> draws;  // indices into segments, per draw
};

// Monte Carlo E-step for one sequence: `samples` posterior draws, every
// segment of every track weighted by occurrences / samples.
EStepResult e_step(const ForwardTable& table, std::size_t samples, std::uint64_t seed);

struct MStepResult {
  Hyperparams theta;
  double objective = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

// Maximizes the weighted objective by Nelder-Mead over
// (mu0, log k0, log nu0, log sigma0^2), starting from `start`.
MStepResult maximize_m_step(std::span<const WeightedStats> segments, const Hyperparams& start,
                            double reltol = 1e-8, std::size_t max_evaluations = 500);

// Monte Carlo EM over one or more training sequences. Every track of every
// sequence shares one theta. Deterministic given cfg.seed.
McemResult mcem_fit(std::span<const ObservedSequence> sequences, const Hyperparams& theta_init,
                    const McemConfig& cfg);

}  // namespace bayescp
