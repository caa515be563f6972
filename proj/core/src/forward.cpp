#include "bayescp/forward.hpp"

#include <algorithm>
#include <cmath>

#include "bayescp/errors.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp {

ForwardTable::ForwardTable(EvidenceKernel kernel, SegPrior prior)
    : kernel_(std::move(kernel)), prior_(std::move(prior)) {
  if (kernel_.size() != prior_.n())
    throw ConfigError("sequence length and segmentation prior disagree on n");

  const std::size_t n = prior_.n();
  const std::size_t width = n + 1;
  const std::size_t min_len = prior_.min_length();
  const std::size_t max_len = prior_.max_length();
  table_.assign(prior_.k_max() * width, kLogZero);

  for (std::size_t i = min_len; i <= std::min(max_len, n); ++i)
    table_[i] = kernel_.log_evidence(0, i);

  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t k = 2; k <= prior_.k_max(); ++k) {
    const double* prev = &table_[(k - 2) * width];
    double* row = &table_[(k - 1) * width];
    for (std::size_t i = k * min_len; i <= n; ++i) {
      const std::size_t j_lo = std::max((k - 1) * min_len, i > max_len ? i - max_len : 0);
      const std::size_t j_hi = i - min_len;
      terms.clear();
      for (std::size_t j = j_lo; j <= j_hi; ++j) {
        if (prev[j] == kLogZero) continue;
        terms.push_back(prev[j] + kernel_.log_evidence(j, i));
      }
      if (!terms.empty()) row[i] = log_sum_exp(terms);
    }
  }
}

double ForwardTable::log_seg1(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > n()) throw WindowError("segment outside the sequence");
  if (!prior_.admits_length(end - begin)) return kLogZero;
  return kernel_.log_evidence(begin, end);
}

ForwardTable forward(EvidenceKernel kernel, SegPrior prior) {
  return ForwardTable(std::move(kernel), std::move(prior));
}

ForwardTable forward(const ObservedSequence& seq, const Hyperparams& theta, SegPrior prior) {
  return ForwardTable(EvidenceKernel(seq, theta), std::move(prior));
}

namespace {

// log p(k) + log p(y | k) for every k, kLogZero where S(n, k) = 0.
std::vector<double> log_joint_by_count(const ForwardTable& table) {
  const SegPrior& prior = table.prior();
  std::vector<double> out(prior.k_max(), kLogZero);
  for (std::size_t k = 1; k <= prior.k_max(); ++k) {
    const double count = prior.log_count(prior.n(), k);
    const double lp = table.lp_hat(prior.n(), k);
    if (count == kLogZero || lp == kLogZero) continue;
    out[k - 1] = log_prior_num_segments(prior, k) + lp - count;
  }
  return out;
}

}  // namespace

std::vector<double> log_posterior_num_segments(const ForwardTable& table) {
  std::vector<double> joint = log_joint_by_count(table);
  const double total = log_sum_exp(joint);
  if (!std::isfinite(total)) throw ModelError("no admissible number of segments");
  for (double& v : joint) {
    if (v != kLogZero) v -= total;
  }
  return joint;
}

double log_marginal_evidence(const ForwardTable& table) {
  return log_sum_exp(log_joint_by_count(table));
}

}  // namespace bayescp
