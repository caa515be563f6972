#include "bayescp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "bayescp/errors.hpp"

namespace bayescp {

namespace {

using Engine = std::mt19937_64;

void fill_normal(Engine& rng, Track& out, std::size_t count, double mean, double sd) {
  std::normal_distribution<double> dist(mean, sd);
  for (std::size_t i = 0; i < count; ++i) out.push_back(dist(rng));
}

SimResult hierarchical(const SimSpec& spec, Engine& rng) {
  spec.theta.validate();
  if (spec.n == 0) throw ConfigError("simulation length must be positive");
  std::size_t k = 0;
  if (spec.k) {
    k = *spec.k;
  } else {
    if (spec.k_max < 1 || spec.k_max > spec.n) throw ConfigError("k_max must lie in [1, n]");
    k = std::uniform_int_distribution<std::size_t>(1, spec.k_max)(rng);
  }
  if (k < 1 || k > spec.n) throw ConfigError("cannot place k segments in n positions");

  std::vector<std::size_t> candidates(spec.n - 1);
  std::iota(candidates.begin(), candidates.end(), std::size_t{1});
  std::vector<std::size_t> cps;
  cps.reserve(k);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(cps), k - 1, rng);
  cps.push_back(spec.n);

  const Hyperparams& th = spec.theta;
  std::chi_squared_distribution<double> chi(th.nu0);
  std::normal_distribution<double> std_normal(0.0, 1.0);
  Track values;
  values.reserve(spec.n);
  std::vector<SegmentParams> params;
  std::size_t prev = 0;
  for (std::size_t c : cps) {
    const double variance = th.nu0 * th.sigma0_sq / chi(rng);
    const double mean = th.mu0 + std::sqrt(variance / th.k0) * std_normal(rng);
    fill_normal(rng, values, c - prev, mean, std::sqrt(variance));
    params.push_back({mean, variance});
    prev = c;
  }
  return {ObservedSequence(std::move(values)), Segmentation{std::move(cps)}, std::move(params)};
}

SimResult single_changepoint(const SimSpec& spec, Engine& rng) {
  if (spec.n < 2) throw ConfigError("single-changepoint scenario needs n >= 2");
  if (!(spec.noise_sd > 0.0)) throw ConfigError("noise standard deviation must be positive");
  const std::size_t cut = spec.n / 2;
  Track values;
  values.reserve(spec.n);
  fill_normal(rng, values, cut, 0.0, spec.noise_sd);
  fill_normal(rng, values, spec.n - cut, spec.jump_mean, spec.noise_sd);
  const double var = spec.noise_sd * spec.noise_sd;
  return {ObservedSequence(std::move(values)), Segmentation{{cut, spec.n}},
          {{0.0, var}, {spec.jump_mean, var}}};
}

SimResult gap_study(const SimSpec& spec, Engine& rng) {
  Track observed;
  observed.reserve(250);
  fill_normal(rng, observed, 100, -1.0, 1.0);
  fill_normal(rng, observed, 50, -0.6, 1.0);
  fill_normal(rng, observed, 100, 1.0, 1.0);

  const std::size_t g = spec.gap_length;
  Track values(observed.begin(), observed.begin() + 100);
  values.insert(values.end(), g, kMissing);
  values.insert(values.end(), observed.begin() + 100, observed.end());
  return {ObservedSequence(std::move(values)), Segmentation{{100, 150 + g, 250 + g}},
          {{-1.0, 1.0}, {-0.6, 1.0}, {1.0, 1.0}}};
}

}  // namespace

SimResult simulate(const SimSpec& spec) {
  Engine rng(spec.seed);
  SimResult out = [&] {
    switch (spec.scenario) {
      case Scenario::kHierarchical:
        return hierarchical(spec, rng);
      case Scenario::kSingleChangepoint:
        return single_changepoint(spec, rng);
      case Scenario::kGapStudy:
        return gap_study(spec, rng);
    }
    throw ConfigError("unknown scenario");
  }();

  if (spec.gaps.empty()) return out;
  std::vector<Gap> gaps = spec.gaps;
  std::sort(gaps.begin(), gaps.end(), [](const Gap& a, const Gap& b) { return a.first < b.first; });
  const std::size_t n = out.data.size();
  for (std::size_t g = 0; g < gaps.size(); ++g) {
    if (gaps[g].first < 1 || gaps[g].first > gaps[g].last || gaps[g].last > n)
      throw ConfigError("gap outside 1..n");
    if (g > 0 && gaps[g].first <= gaps[g - 1].last) throw ConfigError("gaps overlap");
  }
  std::vector<Track> tracks = out.data.tracks();
  for (const Gap& gap : gaps) {
    for (std::size_t p = gap.first; p <= gap.last; ++p) tracks[0][p - 1] = kMissing;
  }
  out.data = ObservedSequence(std::move(tracks));
  return out;
}

}  // namespace bayescp
