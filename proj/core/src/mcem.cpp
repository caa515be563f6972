#include "bayescp/mcem.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "bayescp/errors.hpp"
#include "bayescp/forward.hpp"
#include "bayescp/inference.hpp"
#include "bayescp/nelder_mead.hpp"

namespace bayescp {

void McemConfig::validate() const {
  if (iterations < 1) throw ConfigError("MCEM needs at least one iteration");
  if (samples_per_sequence < 1) throw ConfigError("MCEM needs at least one sample per sequence");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  if (!(optimizer_tolerance > 0.0)) throw ConfigError("optimizer tolerance must be positive");
  if (max_evaluations < 1) throw ConfigError("optimizer needs at least one evaluation");
}

std::string to_string(McemStatus status) {
  switch (status) {
    case McemStatus::kCompleted:
      return "completed";
    case McemStatus::kStopped:
      return "stopped";
    case McemStatus::kOptimizerWarning:
      return "optimizer_warning";
    case McemStatus::kFallbackDefault:
      return "fallback_default";
  }
  return "unknown";
}

double m_step_objective(const Hyperparams& theta, std::span<const SufficientStats> segments) {
  double total = 0.0;
  for (const auto& s : segments) total += segment_log_evidence(theta, s);
  return total;
}

double m_step_objective(const Hyperparams& theta, std::span<const WeightedStats> segments) {
  double total = 0.0;
  for (const auto& s : segments) total += s.weight * segment_log_evidence(theta, s.stats);
  return total;
}

namespace {

constexpr double kLogBound = 30.0;

Hyperparams from_coordinates(std::span<const double> x, ModelVariant variant) {
  Hyperparams theta;
  theta.mu0 = x[0];
  theta.k0 = std::exp(x[1]);
  theta.nu0 = std::exp(x[2]);
  theta.sigma0_sq = std::exp(x[3]);
  theta.variant = variant;
  return theta;
}

// Streams are keyed by (iteration, sequence) so that adding sequences does
// not perturb the draws of the others.
std::uint64_t stream_seed(std::uint64_t seed, std::size_t iteration, std::size_t sequence) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (iteration * 1000003ULL + sequence + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

MStepResult maximize_m_step(std::span<const WeightedStats> segments, const Hyperparams& start,
                            double reltol, std::size_t max_evaluations) {
  if (segments.empty()) throw DomainError("M-step needs at least one segment");
  start.validate();
  const ModelVariant variant = start.variant;

  auto negative_objective = [&](std::span<const double> x) {
    for (std::size_t d = 1; d < 4; ++d) {
      if (std::abs(x[d]) > kLogBound) return std::numeric_limits<double>::infinity();
    }
    return -m_step_objective(from_coordinates(x, variant), segments);
  };

  std::vector<double> x0{start.mu0, std::log(start.k0), std::log(start.nu0),
                         std::log(start.sigma0_sq)};
  NelderMeadOptions options;
  options.reltol = reltol;
  options.max_evaluations = max_evaluations;
  options.initial_step = {0.5 * std::sqrt(start.sigma0_sq) + 0.1, 0.5, 0.5, 0.5};

  NelderMeadResult nm = nelder_mead(negative_objective, x0, options);
  std::size_t evaluations = nm.evaluations;
  // One restart from the best vertex guards against a collapsed simplex.
  if (evaluations < max_evaluations) {
    options.max_evaluations = max_evaluations - evaluations;
    NelderMeadResult again = nelder_mead(negative_objective, nm.x, options);
    evaluations += again.evaluations;
    if (again.value <= nm.value) {
      const bool converged = again.converged;
      nm = std::move(again);
      nm.converged = converged;
    }
  }

  MStepResult out;
  out.theta = from_coordinates(nm.x, variant);
  out.objective = -nm.value;
  out.converged = nm.converged;
  out.evaluations = evaluations;
  return out;
}

EStepResult e_step(const ForwardTable& table, std::size_t samples, std::uint64_t seed) {
  const SampleSet draws = sample_segmentations(table, samples, seed);
  const std::size_t tracks = table.kernel().num_tracks();
  using Key = std::tuple<std::size_t, std::size_t, std::size_t>;
  std::map<Key, std::size_t> occurrences;
  for (const auto& a : draws.samples) {
    for (std::size_t t = 0; t < a.num_segments(); ++t) {
      const auto [begin, end] = a.segment(t);
      for (std::size_t r = 0; r < tracks; ++r) ++occurrences[Key{r, begin, end}];
    }
  }

  EStepResult out;
  std::map<Key, std::size_t> index;
  out.segments.reserve(occurrences.size());
  const double inv_n = 1.0 / static_cast<double>(samples);
  for (const auto& [key, count] : occurrences) {
    const auto [r, begin, end] = key;
    index[key] = out.segments.size();
    out.segments.push_back({r, begin, end, static_cast<double>(count) * inv_n});
  }
  out.draws.reserve(draws.samples.size());
  for (const auto& a : draws.samples) {
    std::vector<std::size_t> used;
    for (std::size_t t = 0; t < a.num_segments(); ++t) {
      const auto [begin, end] = a.segment(t);
      for (std::size_t r = 0; r < tracks; ++r) used.push_back(index.at(Key{r, begin, end}));
    }
    out.draws.push_back(std::move(used));
  }
  return out;
}

McemResult mcem_fit(std::span<const ObservedSequence> sequences, const Hyperparams& theta_init,
                    const McemConfig& cfg) {
  cfg.validate();
  theta_init.validate();
  if (sequences.empty()) throw ConfigError("MCEM needs at least one training sequence");

  McemResult result;
  result.theta = theta_init;

  if (sequences.size() == 1) {
    const ObservedSequence& only = sequences.front();
    std::size_t observed = 0;
    for (std::size_t r = 0; r < only.num_tracks(); ++r) observed += only.observed_count(r);
    if (observed < cfg.min_single_sequence_observations) {
      result.theta = default_hyperparams(only.track(0), theta_init.variant);
      result.status = McemStatus::kFallbackDefault;
      return result;
    }
  }

  std::vector<SegPrior> priors;
  priors.reserve(sequences.size());
  for (const auto& seq : sequences)
    priors.push_back(build_seg_prior(seq.size(), std::min(cfg.k_max, seq.size()), cfg.bounds));

  bool optimizer_warning = false;
  Hyperparams theta = theta_init;
  for (std::size_t iter = 0;; ++iter) {
    // The forward pass serves both the evidence trace at the current theta
    // and the E-step.
    double log_evidence = 0.0;
    std::vector<ForwardTable> tables;
    tables.reserve(sequences.size());
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      tables.emplace_back(EvidenceKernel(sequences[s], theta), priors[s]);
      log_evidence += log_marginal_evidence(tables.back());
    }
    result.log_evidence_trace.push_back(log_evidence);

    const std::size_t done = result.log_evidence_trace.size() - 1;
    if (done > 0 && cfg.stop_tolerance > 0.0) {
      const double prev = result.log_evidence_trace[done - 1];
      if (std::abs(log_evidence - prev) <= cfg.stop_tolerance * std::abs(prev)) {
        result.status = McemStatus::kStopped;
        break;
      }
    }
    if (done == cfg.iterations) break;

    std::vector<EStepResult> expectations;
    expectations.reserve(sequences.size());
    std::vector<WeightedStats> segments;
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      expectations.push_back(
          e_step(tables[s], cfg.samples_per_sequence, stream_seed(cfg.seed, iter, s)));
      for (const auto& seg : expectations.back().segments)
        segments.push_back({tables[s].kernel().stats(seg.track, seg.begin, seg.end), seg.weight});
    }

    const MStepResult m =
        maximize_m_step(segments, theta, cfg.optimizer_tolerance, cfg.max_evaluations);
    optimizer_warning = optimizer_warning || !m.converged;
    theta = m.theta;

    // Standard error of the Monte Carlo average at the new theta: the
    // per-draw objectives are iid within a sequence.
    double variance = 0.0;
    std::size_t offset = 0;
    for (const auto& ex : expectations) {
      const std::size_t draws = ex.draws.size();
      if (draws >= 2) {
        std::vector<double> evidence(ex.segments.size());
        for (std::size_t i = 0; i < evidence.size(); ++i)
          evidence[i] = segment_log_evidence(theta, segments[offset + i].stats);
        std::vector<double> values;
        values.reserve(draws);
        for (const auto& used : ex.draws) {
          double v = 0.0;
          for (std::size_t i : used) v += evidence[i];
          values.push_back(v);
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(draws);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        variance += ss / static_cast<double>(draws - 1) / static_cast<double>(draws);
      }
      offset += ex.segments.size();
    }
    result.objective_stderr.push_back(std::sqrt(variance));
    ++result.iterations_run;
  }

  result.theta = theta;
  if (result.status != McemStatus::kStopped && optimizer_warning)
    result.status = McemStatus::kOptimizerWarning;
  return result;
}

}  // namespace bayescp
