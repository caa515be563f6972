#include <algorithm>
#include <cmath>

#include "bayescp/errors.hpp"
#include "bayescp/inference.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp {

std::vector<double> changepoint_marginals(const SampleSet& samples, std::size_t n) {
  if (samples.samples.empty()) throw ConfigError("need at least one sample");
  std::vector<double> freq(n > 0 ? n - 1 : 0, 0.0);
  for (const auto& a : samples.samples) {
    for (std::size_t t = 0; t + 1 < a.changepoints.size(); ++t) {
      const std::size_t c = a.changepoints[t];
      if (c >= 1 && c < n) freq[c - 1] += 1.0;
    }
  }
  const double total = static_cast<double>(samples.samples.size());
  for (double& f : freq) f /= total;
  return freq;
}

std::vector<double> exact_changepoint_marginals(const ForwardTable& table) {
  const SegPrior& prior = table.prior();
  const std::size_t n = table.n();
  const std::size_t width = n + 1;
  const std::size_t k_max = prior.k_max();
  if (n < 2) return {};

  // suffix[kappa-1][j]: log of the summed evidence products over admissible
  // segmentations of positions j+1..n into kappa segments.
  const std::size_t kappa_max = k_max > 1 ? k_max - 1 : 1;
  std::vector<double> suffix(kappa_max * width, kLogZero);
  for (std::size_t j = 0; j < n; ++j) suffix[j] = table.log_seg1(j, n);

  std::vector<double> terms;
  for (std::size_t kappa = 2; kappa <= kappa_max; ++kappa) {
    const double* prev = &suffix[(kappa - 2) * width];
    double* row = &suffix[(kappa - 1) * width];
    for (std::size_t j = 0; j < n; ++j) {
      terms.clear();
      const std::size_t end_lo = j + prior.min_length();
      const std::size_t end_hi = std::min(n - 1, j + prior.max_length());
      for (std::size_t e = end_lo; e <= end_hi; ++e) {
        if (prev[e] == kLogZero) continue;
        terms.push_back(table.log_seg1(j, e) + prev[e]);
      }
      if (!terms.empty()) row[j] = log_sum_exp(terms);
    }
  }

  const double log_evidence = log_marginal_evidence(table);
  std::vector<double> out(n - 1, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    terms.clear();
    for (std::size_t total = 2; total <= k_max; ++total) {
      const double count = prior.log_count(n, total);
      if (count == kLogZero) continue;
      const double weight = log_prior_num_segments(prior, total) - count;
      for (std::size_t k = 1; k < total; ++k) {
        const double left = table.lp_hat(j, k);
        const double right = suffix[(total - k - 1) * width + j];
        if (left == kLogZero || right == kLogZero) continue;
        terms.push_back(weight + left + right);
      }
    }
    if (!terms.empty()) out[j - 1] = std::exp(log_sum_exp(terms) - log_evidence);
  }
  return out;
}

}  // namespace bayescp
