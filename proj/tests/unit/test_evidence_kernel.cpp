#include <catch_amalgamated.hpp>

#include <vector>

#include "bayescp/errors.hpp"
#include "bayescp/evidence.hpp"
#include "bayescp/evidence_kernel.hpp"
#include "test_support.hpp"

using namespace bayescp;
using bayescp::testing::Gen;
using Catch::Matchers::WithinAbs;

TEST_CASE("kernel agrees with direct evidence on every window") {
  Gen g(21);
  for (auto variant : {ModelVariant::kIidNormal, ModelVariant::kAr1}) {
    Track y = bayescp::testing::random_track(g, 30, 0.15);
    for (auto& v : y) v += 50.0;  // large offset exercises the centring
    const auto th = bayescp::testing::random_theta(g, variant);
    const EvidenceKernel kernel(ObservedSequence(y), th);
    for (std::size_t b = 0; b < y.size(); ++b) {
      for (std::size_t e = b + 1; e <= y.size(); ++e) {
        const auto window = std::span<const double>(y).subspan(b, e - b);
        CHECK_THAT(kernel.log_evidence(b, e), WithinAbs(segment_log_evidence(th, window), 1e-9));
      }
    }
  }
}

TEST_CASE("kernel statistics match a direct pass") {
  const Track y{1.0, kMissing, 2.0, 4.0, kMissing, kMissing, -1.0, 3.0};
  const EvidenceKernel kernel(ObservedSequence(y), Hyperparams{});
  for (std::size_t b = 0; b < y.size(); ++b) {
    for (std::size_t e = b + 1; e <= y.size(); ++e) {
      const auto s = kernel.stats(0, b, e);
      const auto d = SufficientStats::from_window(std::span<const double>(y).subspan(b, e - b));
      CHECK(s.count == d.count);
      CHECK(s.length == d.length);
      CHECK_THAT(s.mean, WithinAbs(d.mean, 1e-12));
      CHECK_THAT(s.sq_dev, WithinAbs(d.sq_dev, 1e-12));
      CHECK_THAT(s.noise_sq, WithinAbs(d.noise_sq, 1e-12));
      CHECK_THAT(s.sum_xy, WithinAbs(d.sum_xy, 1e-12));
    }
  }
}

TEST_CASE("kernel sums replica tracks") {
  Gen g(2);
  const std::vector<Track> tracks{bayescp::testing::random_track(g, 12, 0.1),
                                  bayescp::testing::random_track(g, 12, 0.1)};
  const std::vector<Hyperparams> thetas{bayescp::testing::random_theta(g),
                                        bayescp::testing::random_theta(g)};
  const ObservedSequence seq(tracks);
  const EvidenceKernel kernel(seq, thetas);
  CHECK(kernel.num_tracks() == 2);
  CHECK_THAT(kernel.log_evidence(3, 10),
             WithinAbs(kernel.log_evidence(0, 3, 10) + kernel.log_evidence(1, 3, 10), 1e-12));
  CHECK_THAT(kernel.log_evidence(3, 10), WithinAbs(segment_log_evidence_multi(seq, thetas, 3, 10), 1e-9));
}

TEST_CASE("kernel rejects bad windows and inconsistent hyperparameters") {
  const ObservedSequence seq(Track{1.0, 2.0, 3.0});
  const EvidenceKernel kernel(seq, Hyperparams{});
  CHECK_THROWS_AS(kernel.log_evidence(2, 2), WindowError);
  CHECK_THROWS_AS(kernel.log_evidence(0, 4), WindowError);
  CHECK_THROWS_AS(kernel.stats(0, 3, 1), WindowError);
  CHECK_THROWS_AS(EvidenceKernel(seq, std::vector<Hyperparams>{}), DomainError);

  Hyperparams ar;
  ar.variant = ModelVariant::kAr1;
  const ObservedSequence two(std::vector<Track>{{1.0, 2.0}, {3.0, 4.0}});
  CHECK_THROWS_AS(EvidenceKernel(two, std::vector<Hyperparams>{Hyperparams{}, ar}), DomainError);
}

TEST_CASE("all-missing windows have zero evidence") {
  const ObservedSequence seq(Track{kMissing, kMissing, 1.0, kMissing});
  const EvidenceKernel kernel(seq, Hyperparams{});
  CHECK(kernel.log_evidence(0, 2) == 0.0);
  CHECK(kernel.log_evidence(3, 4) == 0.0);
  CHECK(kernel.log_evidence(0, 4) == kernel.log_evidence(2, 3));
}
