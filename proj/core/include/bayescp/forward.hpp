#pragma once

#include <cstddef>
#include <vector>

#include "bayescp/evidence_kernel.hpp"
#include "bayescp/hyperparams.hpp"
#include "bayescp/seg_prior.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

// Log-domain forward recursion over prefixes.
//
// lp_hat(i, k) = log[S(i, k) p(y_{1:i} | k segments)], i.e. the log of the
// sum over admissible segmentations of 1..i into k segments of the product
// of segment evidences. It satisfies
//   lp_hat(i, 1) = log S(i, 1) + log p(y_{1:i} | 1)
//   lp_hat(i, k) = log sum_j exp(lp_hat(j, k-1) + log_seg1(j, i))
// where log_seg1(j, i) is the evidence of positions j+1..i when that length
// is admissible and kLogZero otherwise.
class ForwardTable {
 public:
  ForwardTable(EvidenceKernel kernel, SegPrior prior);

  std::size_t n() const noexcept { return prior_.n(); }
  std::size_t k_max() const noexcept { return prior_.k_max(); }

  // 0 <= i <= n, 1 <= k <= k_max. Entries are finite or kLogZero.
  double lp_hat(std::size_t i, std::size_t k) const { return table_[(k - 1) * (n() + 1) + i]; }

  // Single-segment term of the recursion for positions begin+1..end.
  double log_seg1(std::size_t begin, std::size_t end) const;

  const EvidenceKernel& kernel() const noexcept { return kernel_; }
  const SegPrior& prior() const noexcept { return prior_; }

 private:
  EvidenceKernel kernel_;
  SegPrior prior_;
  std::vector<double> table_;
};

// Throws ConfigError when the kernel and prior disagree on n.
ForwardTable forward(EvidenceKernel kernel, SegPrior prior);
ForwardTable forward(const ObservedSequence& seq, const Hyperparams& theta, SegPrior prior);

// Normalized log p(k | y) for k = 1..k_max (index k-1); kLogZero for counts
// with no admissible segmentation. Throws ModelError when every k is
// inadmissible or has zero evidence.
std::vector<double> log_posterior_num_segments(const ForwardTable& table);

// log p(y) = log sum_k p(k) p(y | k).
double log_marginal_evidence(const ForwardTable& table);

}  // namespace bayescp
