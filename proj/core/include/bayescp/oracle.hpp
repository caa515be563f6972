#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bayescp/hyperparams.hpp"
#include "bayescp/seg_prior.hpp"
#include "bayescp/segmentation.hpp"
#include "bayescp/sequence.hpp"

// Brute-force reference computations. Slow by construction; they exist so
// that the recursions and closed forms can be checked against routes that
// share none of their machinery.
namespace bayescp::oracle {

struct EnumeratedPosterior {
  std::vector<Segmentation> segmentations;  // every admissible A, k <= k_max
  std::vector<double> log_joint;            // log p(A) + log p(y | A)
  std::vector<double> log_posterior;        // log p(A | y)
  double log_evidence = 0.0;                // log p(y)
  std::vector<double> log_posterior_k;      // index k-1; kLogZero if no A has k segments
  std::vector<double> changepoint_marginals;  // positions 1..n-1
  std::size_t map_index = 0;                // argmax, same tie rule as map_segmentation
};

// Direct summation over all admissible segmentations, with segment
// evidence recomputed from raw values for each segment and p(A | k) taken
// from the enumerated count. The prior supplies only n, k_max and the
// length bounds. Throws OracleScaleError unless n <= 14 and k_max <= 4.
EnumeratedPosterior enumerate_posterior(const ObservedSequence& seq,
                                        std::span<const Hyperparams> thetas,
                                        const SegPrior& prior);
EnumeratedPosterior enumerate_posterior(const ObservedSequence& seq, const Hyperparams& theta,
                                        const SegPrior& prior);

// All admissible segmentations of 1..n into at most k_max segments.
std::vector<Segmentation> enumerate_segmentations(std::size_t n, std::size_t k_max,
                                                  std::size_t min_length = 1,
                                                  std::size_t max_length = 0);

// log of the double integral over (mu, sigma^2), or (beta, sigma^2) for
// AR(1), of likelihood times prior, by nested adaptive Gauss-Kronrod
// quadrature in (mu, log sigma^2). NaN entries are missing. Throws
// OracleScaleError for windows longer than 50 and OracleNumericsError when
// the error estimate misses the 1e-8 relative target.
double quadrature_evidence(const Hyperparams& theta, std::span<const double> window);

}  // namespace bayescp::oracle
