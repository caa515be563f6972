#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bayescp/errors.hpp"
#include "bayescp/evidence.hpp"
#include "bayescp/hyperparams.hpp"
#include "bayescp/oracle.hpp"
#include "test_support.hpp"

using namespace bayescp;
using bayescp::testing::Gen;
using Catch::Matchers::WithinAbs;

namespace {

Hyperparams theta_of(double mu0, double k0, double nu0, double s0, ModelVariant v = ModelVariant::kIidNormal) {
  Hyperparams th;
  th.mu0 = mu0;
  th.k0 = k0;
  th.nu0 = nu0;
  th.sigma0_sq = s0;
  th.variant = v;
  return th;
}

constexpr double M = kMissing;

// log of the scaled-inverse-chi^2 mixture of N(y | 0, sigma^2), integrated in
// t = log sigma^2.
double ar1_single_point_quadrature(const Hyperparams& th, double y) {
  const double half = 0.5 * th.nu0;
  auto f = [&](double t) {
    const double var = std::exp(t);
    const double log_prior = half * std::log(half * th.sigma0_sq) - std::lgamma(half) -
                             half * t - half * th.sigma0_sq / var;
    const double log_lik = -0.5 * std::log(2 * std::numbers::pi * var) - y * y / (2 * var);
    return std::exp(log_prior + log_lik);
  };
  double err = 0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, -60.0, 60.0, 15, 1e-13, &err);
  return std::log(v);
}

}  // namespace

TEST_CASE("default hyperparameters follow the data") {
  const Track a{1, 2, 3};
  const auto th = default_hyperparams(a);
  CHECK(th.mu0 == 2.0);
  CHECK(th.k0 == 0.01);
  CHECK(th.nu0 == 3.0);
  CHECK(th.sigma0_sq == 1.0);

  const Track b{0, M, 2};
  const auto tb = default_hyperparams(b);
  CHECK(tb.mu0 == 1.0);
  CHECK(tb.sigma0_sq == 2.0);

  CHECK_THROWS_AS(default_hyperparams(Track{5, 5, 5, 5}), DegenerateVariance);
  CHECK_THROWS_AS(default_hyperparams(Track{1.0}), InsufficientData);
  CHECK_THROWS_AS(default_hyperparams(Track{M, 4.0, M}), InsufficientData);

  const auto ar = default_hyperparams(a, ModelVariant::kAr1);
  CHECK(ar.mu0 == 0.0);
  CHECK(ar.variant == ModelVariant::kAr1);
}

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS(theta_of(0, 0, 1, 1).validate(), DomainError);
  CHECK_THROWS_AS(theta_of(0, 1, -1, 1).validate(), DomainError);
  CHECK_THROWS_AS(theta_of(0, 1, 1, 0).validate(), DomainError);
  CHECK_THROWS_AS(theta_of(std::nan(""), 1, 1, 1).validate(), DomainError);
  CHECK_NOTHROW(theta_of(0, 1, 1, 1).validate());
  CHECK(parse_model_variant("ar1") == ModelVariant::kAr1);
  CHECK(to_string(ModelVariant::kIidNormal) == "iid");
  CHECK_THROWS_AS(parse_model_variant("ar2"), ConfigError);
}

TEST_CASE("posterior update") {
  const auto prior = theta_of(0.3, 1.7, 2.5, 0.8);
  const auto empty = posterior_update(prior, SufficientStats::from_window(std::vector<double>{M, M}));
  CHECK(empty.mu_n == prior.mu0);
  CHECK(empty.k_n == prior.k0);
  CHECK(empty.nu_n == prior.nu0);
  CHECK(empty.nu_sigma_sq_n == prior.nu0 * prior.sigma0_sq);

  const auto one = posterior_update(theta_of(0, 1, 1, 1), SufficientStats::from_window(std::vector<double>{0.0}));
  CHECK(one.mu_n == 0.0);
  CHECK(one.k_n == 2.0);
  CHECK(one.nu_n == 2.0);
  CHECK(one.nu_sigma_sq_n == 1.0);

  Gen g(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto th = bayescp::testing::random_theta(g);
    std::vector<double> y(6);
    for (auto& v : y) v = g.normal(1.0, 2.0);
    double sum = 0, sq = 0;
    for (double v : y) sum += v;
    const double mean = sum / 6;
    for (double v : y) sq += (v - mean) * (v - mean);
    const auto post = posterior_update(th, SufficientStats::from_window(y));
    CHECK_THAT(post.k_n, WithinAbs(th.k0 + 6, 1e-12));
    CHECK_THAT(post.nu_n, WithinAbs(th.nu0 + 6, 1e-12));
    CHECK_THAT(post.mu_n, WithinAbs((th.k0 * th.mu0 + sum) / (th.k0 + 6), 1e-12));
    CHECK_THAT(post.nu_sigma_sq_n,
               WithinAbs(th.nu0 * th.sigma0_sq + sq +
                             th.k0 * 6 / (th.k0 + 6) * (mean - th.mu0) * (mean - th.mu0),
                         1e-10));
  }

  CHECK_THROWS_AS(posterior_update(theta_of(0, 1, 1, 1, ModelVariant::kAr1), SufficientStats{}), DomainError);
}

TEST_CASE("iid evidence closed form") {
  CHECK(segment_log_evidence(theta_of(0, 1, 1, 1), std::vector<double>{M, M, M}) == 0.0);

  const double single = segment_log_evidence(theta_of(0, 1, 1, 1), std::vector<double>{0.0});
  CHECK_THAT(single, WithinAbs(std::log(1.0 / (std::numbers::pi * std::sqrt(2.0))), 1e-14));
  CHECK_THAT(oracle::quadrature_evidence(theta_of(0, 1, 1, 1), std::vector<double>{0.0}),
             WithinAbs(single, 1e-9));

  // 2-D quadrature in extended precision, computed offline.
  CHECK_THAT(segment_log_evidence(theta_of(0.5, 0.3, 2.5, 1.7), std::vector<double>{1.2, -0.4, 2.3}),
             WithinAbs(-6.2572629532510677811, 1e-12));
  CHECK_THAT(segment_log_evidence(theta_of(-1.0, 2.0, 4.0, 0.5),
                                  std::vector<double>{-0.7, M, -1.4, -0.9, M}),
             WithinAbs(-2.4417490777388936593, 1e-12));

  Gen g(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto th = bayescp::testing::random_theta(g);
    const auto y = bayescp::testing::random_track(g, g.integer(1, 12), 0.2);
    CHECK_THAT(segment_log_evidence(th, y), WithinAbs(oracle::quadrature_evidence(th, y), 1e-6));
  }
}

TEST_CASE("ar1 evidence closed form") {
  const auto th = theta_of(0.2, 1.5, 3.0, 0.8, ModelVariant::kAr1);
  CHECK_THAT(segment_log_evidence_ar1(th, std::vector<double>{0.9, 0.5, -0.3}),
             WithinAbs(-3.5891567671265795086, 1e-12));
  CHECK_THAT(segment_log_evidence_ar1(theta_of(0.0, 0.7, 2.0, 1.2, ModelVariant::kAr1),
                                      std::vector<double>{1.1, 0.4, M, -0.8, -0.5}),
             WithinAbs(-5.8006295754532271594, 1e-12));

  CHECK(segment_log_evidence_ar1(th, std::vector<double>{}) == 0.0);
  CHECK_THROWS_AS(segment_log_evidence_ar1(theta_of(0, 1, 1, 1), std::vector<double>{1.0}), DomainError);

  for (double y : {-2.0, 0.0, 0.7, 3.5}) {
    CHECK_THAT(segment_log_evidence_ar1(th, std::vector<double>{y}),
               WithinAbs(ar1_single_point_quadrature(th, y), 1e-9));
  }

  Gen g(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto t = bayescp::testing::random_theta(g, ModelVariant::kAr1);
    std::vector<double> y(g.integer(2, 10));
    for (auto& v : y) v = g.coin(0.15) ? M : g.normal();
    CHECK_THAT(segment_log_evidence_ar1(t, y), WithinAbs(oracle::quadrature_evidence(t, y), 1e-6));
  }

  // A very tight prior at beta = 0 reduces to zero-mean iid noise.
  const std::vector<double> y{0.4, -1.2, 0.9, 0.1, -0.6};
  const double ar = segment_log_evidence_ar1(theta_of(0, 1e8, 2.0, 0.9, ModelVariant::kAr1), y);
  const double iid = segment_log_evidence(theta_of(0, 1e8, 2.0, 0.9), y);
  CHECK_THAT(ar, WithinAbs(iid, 1e-4));
}

TEST_CASE("multi-track evidence") {
  Gen g(5);
  const auto th = bayescp::testing::random_theta(g);
  const Track a = bayescp::testing::random_track(g, 9, 0.1);
  const ObservedSequence one(a);
  const std::vector<Hyperparams> t1{th};
  CHECK(segment_log_evidence_multi(one, t1, 2, 7) ==
        segment_log_evidence(th, std::span<const double>(a).subspan(2, 5)));

  const ObservedSequence twin(std::vector<Track>{a, a});
  const std::vector<Hyperparams> t2{th, th};
  CHECK(segment_log_evidence_multi(twin, t2, 0, 9) == 2.0 * segment_log_evidence(th, a));

  std::vector<Track> tracks;
  std::vector<Hyperparams> thetas;
  for (int r = 0; r < 3; ++r) {
    tracks.push_back(bayescp::testing::random_track(g, 9, 0.2));
    thetas.push_back(bayescp::testing::random_theta(g));
  }
  const ObservedSequence three(tracks);
  double expect = 0.0;
  for (int r = 0; r < 3; ++r)
    expect += segment_log_evidence(thetas[r], std::span<const double>(tracks[r]).subspan(1, 6));
  CHECK_THAT(segment_log_evidence_multi(three, thetas, 1, 7), WithinAbs(expect, 1e-12));

  CHECK_THROWS_AS(segment_log_evidence_multi(three, thetas, 4, 4), WindowError);
  CHECK_THROWS_AS(segment_log_evidence_multi(three, thetas, 0, 10), WindowError);
  CHECK_THROWS_AS(segment_log_evidence_multi(three, t2, 0, 9), DomainError);
}

TEST_CASE("sufficient statistics merge") {
  const std::vector<double> y{1.0, 2.5, M, -0.5, 3.0, 0.2, M, M, 4.0};
  for (std::size_t cut = 0; cut <= y.size(); ++cut) {
    const auto whole = SufficientStats::from_window(y);
    const auto left = SufficientStats::from_window(std::span<const double>(y).first(cut));
    const auto right = SufficientStats::from_window(std::span<const double>(y).subspan(cut));
    const auto m = merge(left, right);
    CHECK(m.count == whole.count);
    CHECK(m.length == whole.length);
    CHECK_THAT(m.mean, WithinAbs(whole.mean, 1e-12));
    CHECK_THAT(m.sq_dev, WithinAbs(whole.sq_dev, 1e-12));
    CHECK_THAT(m.noise_sq, WithinAbs(whole.noise_sq, 1e-12));
    CHECK_THAT(m.sum_xy, WithinAbs(whole.sum_xy, 1e-12));
    CHECK_THAT(m.sum_xx, WithinAbs(whole.sum_xx, 1e-12));
  }
}
