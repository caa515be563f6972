#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bayescp/errors.hpp"
#include "bayescp/evidence.hpp"
#include "bayescp/mcem.hpp"
#include "bayescp/oracle.hpp"
#include "bayescp/simulate.hpp"
#include "test_support.hpp"

using namespace bayescp;
using bayescp::testing::Gen;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> coords(const Hyperparams& t) {
  return {t.mu0, std::log(t.k0), std::log(t.nu0), std::log(t.sigma0_sq)};
}

Hyperparams from_coords(const std::vector<double>& x) {
  return Hyperparams{x[0], std::exp(x[1]), std::exp(x[2]), std::exp(x[3])};
}

}  // namespace

TEST_CASE("M-step objective") {
  Gen g(1);
  const auto th = bayescp::testing::random_theta(g);
  const std::vector<double> gap{kMissing, kMissing};
  const auto empty = SufficientStats::from_window(gap);
  CHECK(m_step_objective(th, std::vector<SufficientStats>{empty}) == 0.0);

  std::vector<SufficientStats> segs;
  std::vector<std::vector<double>> raw;
  double expect = 0.0;
  for (int i = 0; i < 5; ++i) {
    raw.push_back(bayescp::testing::random_track(g, g.integer(1, 8), 0.2));
    segs.push_back(SufficientStats::from_window(raw.back()));
    expect += segment_log_evidence(th, raw.back());
  }
  segs.push_back(empty);
  CHECK_THAT(m_step_objective(th, segs), WithinAbs(expect, 1e-12));

  double quad = 0.0;
  for (const auto& w : raw) {
    const double q = oracle::quadrature_evidence(th, w);
    CHECK_THAT(segment_log_evidence(th, w), WithinAbs(q, 1e-6));
    quad += q;
  }
  CHECK_THAT(m_step_objective(th, segs), WithinAbs(quad, 5e-6));

  std::vector<WeightedStats> weighted{{segs[0], 0.25}, {segs[1], 2.0}};
  CHECK_THAT(m_step_objective(th, weighted),
             WithinAbs(0.25 * segment_log_evidence(th, segs[0]) + 2.0 * segment_log_evidence(th, segs[1]), 1e-12));
}

TEST_CASE("single-segment fit approaches the plug-in supremum") {
  SimSpec spec;
  spec.n = 150;
  spec.k = 1;
  spec.theta = Hyperparams{1.0, 0.5, 4.0, 0.8};
  spec.seed = 5;
  const auto sim = simulate(spec);
  const std::vector<ObservedSequence> train{sim.data};

  McemConfig cfg;
  cfg.iterations = 1;
  cfg.samples_per_sequence = 1;
  cfg.k_max = 1;
  const auto start = default_hyperparams(sim.data.track(0));
  const auto fit = mcem_fit(train, start, cfg);
  REQUIRE(fit.iterations_run == 1);
  for (double v : coords(fit.theta)) CHECK(std::isfinite(v));

  // One segment has no interior optimum: the evidence keeps growing as k0
  // and nu0 grow, towards the likelihood at (mean, MLE variance).
  const auto s = SufficientStats::from_window(sim.data.track(0));
  const std::vector<SufficientStats> stats{s};
  const double sup = m_step_objective(
      Hyperparams{s.mean, std::exp(30.0), std::exp(30.0), s.sq_dev / static_cast<double>(s.count)}, stats);
  CHECK(fit.theta.k0 > 1e3 * start.k0);
  CHECK(fit.theta.nu0 > 1e3 * start.nu0);
  CHECK(m_step_objective(fit.theta, stats) <= sup + 1e-9);
  CHECK(std::abs(m_step_objective(fit.theta, stats) - sup) < 1e-4 * std::abs(sup));
  CHECK(fit.log_evidence_trace.back() >= fit.log_evidence_trace.front());
}

TEST_CASE("M-step optimum is stationary when interior") {
  std::vector<WeightedStats> segs;
  for (std::uint64_t s = 0; s < 40; ++s) {
    SimSpec spec;
    spec.n = 30;
    spec.k = 1;
    spec.theta = Hyperparams{0.0, 0.5, 5.0, 0.1};
    spec.seed = 300 + s;
    segs.push_back({SufficientStats::from_window(simulate(spec).data.track(0)), 1.0});
  }
  auto gradient_norm = [&](const Hyperparams& t) {
    const auto x = coords(t);
    double norm_sq = 0.0;
    for (std::size_t d = 0; d < 4; ++d) {
      const double h = 1e-5;
      auto xp = x, xm = x;
      xp[d] += h;
      xm[d] -= h;
      const double g = (m_step_objective(from_coords(xp), segs) - m_step_objective(from_coords(xm), segs)) / (2 * h);
      norm_sq += g * g;
    }
    return std::sqrt(norm_sq);
  };

  const auto tight = maximize_m_step(segs, Hyperparams{0.0, 1.0, 1.0, 1.0}, 1e-15, 5000);
  CHECK(tight.converged);
  CHECK(gradient_norm(tight.theta) < 1e-4);

  // The default stopping rule lands within its relative tolerance.
  const auto loose = maximize_m_step(segs, Hyperparams{0.0, 1.0, 1.0, 1.0});
  CHECK(loose.converged);
  CHECK(tight.objective >= loose.objective);
  CHECK(tight.objective - loose.objective < 1e-7 * std::abs(tight.objective));
}

TEST_CASE("a fixed point of the update stops the loop") {
  SimSpec spec;
  spec.n = 120;
  spec.k = 1;
  spec.theta = Hyperparams{0.0, 1.0, 6.0, 1.0};
  spec.seed = 8;
  const std::vector<ObservedSequence> train{simulate(spec).data};

  McemConfig cfg;
  cfg.iterations = 1;
  cfg.samples_per_sequence = 1;
  cfg.k_max = 1;
  const auto first = mcem_fit(train, Hyperparams{0.0, 1.0, 6.0, 1.0}, cfg);

  cfg.iterations = 5;
  cfg.stop_tolerance = 1e-6;
  const auto again = mcem_fit(train, first.theta, cfg);
  CHECK(again.status == McemStatus::kStopped);
  CHECK(again.iterations_run <= 2);
  const auto& tr = again.log_evidence_trace;
  CHECK(std::abs(tr.back() - tr.front()) <= 1e-6 * std::abs(tr.front()));
}

TEST_CASE("multi-sequence fit improves the evidence") {
  std::vector<ObservedSequence> train;
  for (std::uint64_t s = 0; s < 12; ++s) {
    SimSpec spec;
    spec.n = 80;
    spec.k = 3;
    spec.theta = Hyperparams{0.0, 0.5, 5.0, 0.1};
    spec.seed = 100 + s;
    train.push_back(simulate(spec).data);
  }
  McemConfig cfg;
  cfg.iterations = 3;
  cfg.samples_per_sequence = 30;
  cfg.k_max = 8;
  const auto fit = mcem_fit(train, Hyperparams{0.0, 1.0, 1.0, 1.0}, cfg);
  REQUIRE(fit.log_evidence_trace.size() == 4);
  REQUIRE(fit.objective_stderr.size() == 3);
  CHECK(fit.log_evidence_trace.back() > fit.log_evidence_trace.front());
  for (double v : fit.objective_stderr) CHECK(v >= 0.0);
  CHECK(fit.theta.k0 > 0.0);
  CHECK(fit.theta.nu0 > 0.0);
  CHECK(fit.theta.sigma0_sq > 0.0);

  const auto repeat = mcem_fit(train, Hyperparams{0.0, 1.0, 1.0, 1.0}, cfg);
  CHECK(repeat.theta == fit.theta);
  CHECK(repeat.log_evidence_trace == fit.log_evidence_trace);
}

TEST_CASE("short single sequence falls back to default hyperparameters") {
  const Track y{0.1, 0.5, -0.3, 1.2, 0.8};
  const std::vector<ObservedSequence> train{ObservedSequence(y)};
  const auto fit = mcem_fit(train, Hyperparams{}, McemConfig{});
  CHECK(fit.status == McemStatus::kFallbackDefault);
  CHECK(fit.theta == default_hyperparams(y));
  CHECK(to_string(McemStatus::kFallbackDefault) == "fallback_default");
}

TEST_CASE("MCEM configuration errors") {
  McemConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.iterations = 1;
  cfg.samples_per_sequence = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(mcem_fit(std::vector<ObservedSequence>{}, Hyperparams{}, McemConfig{}), ConfigError);
  CHECK_THROWS_AS(maximize_m_step(std::vector<WeightedStats>{}, Hyperparams{}), DomainError);
}
