#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bayescp/log_sum_exp.hpp"
#include "bayescp/oracle.hpp"
#include "bayescp/seg_prior.hpp"
#include "test_support.hpp"

using namespace bayescp;
using namespace bayescp::testing;

namespace {

double log_binomial(double n, double k) {
  return boost::math::lgamma(n + 1) - boost::math::lgamma(k + 1) - boost::math::lgamma(n - k + 1);
}

LengthBounds random_bounds(Gen& g, std::size_t n) {
  if (g.coin(0.4)) return {1, n};
  const std::size_t lo = g.integer(1, std::max<std::size_t>(1, n / 2));
  return {lo, g.integer(lo, n)};
}

}  // namespace

TEST_CASE("unbounded counts are binomial coefficients") {
  const auto full = build_seg_prior(200, 20);
  for (std::size_t i = 1; i <= 200; ++i)
    for (std::size_t k = 1; k <= std::min<std::size_t>(20, i); ++k)
      REQUIRE(std::abs(full.log_count(i, k) - log_binomial(double(i - 1), double(k - 1))) < 1e-9);

  auto g = property_gen(11);
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = g.integer(1, 200);
    const std::size_t kmax = g.integer(1, std::min<std::size_t>(20, n));
    const auto p = build_seg_prior(n, kmax);
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 1; k <= std::min(kmax, i); ++k)
        worst = std::max(worst, std::abs(p.log_count(i, k) - log_binomial(double(i - 1), double(k - 1))));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("conditional prior p(A | k) sums to one") {
  auto g = property_gen(12);
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = g.integer(1, 10);
    const std::size_t kmax = g.integer(1, std::min<std::size_t>(4, n));
    const auto b = random_bounds(g, n);
    const auto p = build_seg_prior(n, kmax, b);
    std::vector<std::vector<double>> by_k(kmax);
    for (const auto& a : oracle::enumerate_segmentations(n, kmax, b.min_length, b.max_length))
      by_k[a.num_segments() - 1].push_back(log_prior_segmentation(p, a) - log_prior_num_segments(p, a.num_segments()));
    for (std::size_t k = 1; k <= kmax; ++k) {
      INFO("n=" << n << " k=" << k << " bounds [" << b.min_length << "," << b.max_length << "]");
      if (by_k[k - 1].empty()) {
        CHECK(p.log_count(n, k) == kLogZero);
      } else {
        CHECK(std::abs(std::exp(log_sum_exp(by_k[k - 1])) - 1.0) < 1e-12);
        CHECK(std::abs(std::exp(p.log_count(n, k)) - double(by_k[k - 1].size())) < 1e-9 * double(by_k[k - 1].size()));
      }
    }
  }
}

TEST_CASE("counts vanish exactly outside the feasible range") {
  auto g = property_gen(13);
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = g.integer(1, 120);
    const std::size_t kmax = g.integer(1, std::min<std::size_t>(12, n));
    const auto b = random_bounds(g, n);
    const auto p = build_seg_prior(n, kmax, b);
    const std::size_t u = std::min(b.max_length, n);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 1; k <= kmax; ++k) {
        const bool feasible = k * b.min_length <= i && i <= k * u;
        INFO("i=" << i << " k=" << k << " l=" << b.min_length << " u=" << u);
        CHECK((p.log_count(i, k) == kLogZero) == !feasible);
      }
  }
}

TEST_CASE("counts satisfy the composition recursion") {
  auto g = property_gen(14);
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = g.integer(2, 60);
    const std::size_t kmax = g.integer(2, std::min<std::size_t>(8, n));
    const auto b = random_bounds(g, n);
    const auto p = build_seg_prior(n, kmax, b);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 2; k <= kmax; ++k) {
        std::vector<double> terms{kLogZero};
        for (std::size_t j = 1; j < i; ++j)
          terms.push_back(p.log_count(j, k - 1) + p.log_count(i - j, 1));
        const double expect = log_sum_exp(terms);
        CHECK(close(p.log_count(i, k), expect, 1e-10));
      }
  }
}
