#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "bayescp/evidence.hpp"
#include "bayescp/evidence_kernel.hpp"
#include "test_support.hpp"

using namespace bayescp;
using namespace bayescp::testing;

TEST_CASE("prefix-sum evidence equals direct summation on every window") {
  auto g = property_gen(1);
  for (int c = 0; c < kPropertyCases; ++c) {
    const auto variant = g.coin(0.5) ? ModelVariant::kAr1 : ModelVariant::kIidNormal;
    const auto th = random_theta(g, variant);
    const Track y = random_track(g, 50, g.uniform(0.0, 0.3));
    const EvidenceKernel kernel(ObservedSequence(y), th);
    double worst = 0.0;
    for (std::size_t b = 0; b < 50; ++b)
      for (std::size_t e = b + 1; e <= 50; ++e) {
        const double direct = segment_log_evidence(th, std::span<const double>(y).subspan(b, e - b));
        worst = std::max(worst, std::abs(kernel.log_evidence(b, e) - direct));
      }
    INFO("case " << c << " variant " << to_string(variant));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("iid evidence is invariant under permutation") {
  auto g = property_gen(2);
  for (int c = 0; c < kPropertyCases; ++c) {
    const auto th = random_theta(g);
    Track y = random_track(g, g.integer(1, 30), 0.2);
    const double before = segment_log_evidence(th, y);
    std::shuffle(y.begin(), y.end(), g.engine());
    CHECK(close(segment_log_evidence(th, y), before, 1e-10));
  }
}

TEST_CASE("inserting a missing position leaves the evidence unchanged") {
  auto g = property_gen(3);
  for (int c = 0; c < kPropertyCases; ++c) {
    const auto th = random_theta(g);
    Track y = random_track(g, g.integer(1, 30), 0.2);
    const double before = segment_log_evidence(th, y);
    y.insert(y.begin() + static_cast<std::ptrdiff_t>(g.integer(0, y.size())), kMissing);
    CHECK(close(segment_log_evidence(th, y), before, 1e-12));

    // AR(1) pairs adjacent observations, so only padding at the window's
    // ends is neutral there.
    const auto ar = random_theta(g, ModelVariant::kAr1);
    Track z = random_track(g, g.integer(1, 30), 0.2);
    const double ar_before = segment_log_evidence(ar, z);
    if (g.coin(0.5)) {
      z.insert(z.begin(), kMissing);
    } else {
      z.push_back(kMissing);
    }
    CHECK(close(segment_log_evidence(ar, z), ar_before, 1e-12));
  }
}

TEST_CASE("sequential conjugate updates equal one joint update") {
  auto g = property_gen(4);
  auto rel = [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)); };
  for (int c = 0; c < kPropertyCases; ++c) {
    const auto th = random_theta(g);
    const Track first = random_track(g, g.integer(1, 20), 0.2);
    const Track second = random_track(g, g.integer(1, 20), 0.2);
    Track both = first;
    both.insert(both.end(), second.begin(), second.end());

    const auto mid = posterior_update(th, SufficientStats::from_window(first));
    const auto chained = posterior_update(mid.as_prior(), SufficientStats::from_window(second));
    const auto joint = posterior_update(th, SufficientStats::from_window(both));
    CHECK(rel(chained.mu_n, joint.mu_n));
    CHECK(rel(chained.k_n, joint.k_n));
    CHECK(rel(chained.nu_n, joint.nu_n));
    CHECK(rel(chained.nu_sigma_sq_n, joint.nu_sigma_sq_n));
    CHECK(joint.nu_sigma_sq_n >= th.nu0 * th.sigma0_sq);
  }
}

TEST_CASE("single-observation evidence is a normalized density") {
  auto g = property_gen(5);
  boost::math::quadrature::sinh_sinh<double> integrator;
  for (int c = 0; c < kPropertyCases; ++c) {
    const auto variant = g.coin(0.5) ? ModelVariant::kAr1 : ModelVariant::kIidNormal;
    auto th = random_theta(g, variant);
    const double mass = integrator.integrate([&](double y) {
      const std::vector<double> w{y};
      return std::exp(segment_log_evidence(th, w));
    }, 1e-10);
    INFO("theta " << th.mu0 << " " << th.k0 << " " << th.nu0 << " " << th.sigma0_sq);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
}
