#include "bayescp/seg_prior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayescp/errors.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp {

namespace detail {

std::vector<double> log_counts_by_last_segment(std::size_t n, std::size_t k_max,
                                               std::size_t min_length, std::size_t max_length) {
  const std::size_t width = n + 1;
  std::vector<double> table(k_max * width, kLogZero);
  for (std::size_t i = min_length; i <= std::min(max_length, n); ++i) table[i] = 0.0;

  std::vector<double> terms;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const double* prev = &table[(k - 2) * width];
    double* row = &table[(k - 1) * width];
    for (std::size_t i = k * min_length; i <= n; ++i) {
      terms.clear();
      for (std::size_t len = min_length; len <= max_length && len < i; ++len) {
        const double t = prev[i - len];
        if (t != kLogZero) terms.push_back(t);
      }
      if (!terms.empty()) row[i] = log_sum_exp(terms);
    }
  }
  return table;
}

}  // namespace detail

namespace {

// Unbounded prior: S(i, k) = C(i-1, k-1), filled with Pascal's rule.
std::vector<double> log_binomial_counts(std::size_t n, std::size_t k_max) {
  const std::size_t width = n + 1;
  std::vector<double> table(k_max * width, kLogZero);
  for (std::size_t i = 1; i <= n; ++i) table[i] = 0.0;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const double* prev = &table[(k - 2) * width];
    double* row = &table[(k - 1) * width];
    for (std::size_t i = k; i <= n; ++i) row[i] = log_add_exp(row[i - 1], prev[i - 1]);
  }
  return table;
}

}  // namespace

double SegPrior::log_count(std::size_t i, std::size_t k) const {
  if (k == 0 || k > k_max_ || i > n_)
    throw DomainError("segment count table queried outside its range");
  return log_counts_[(k - 1) * (n_ + 1) + i];
}

SegPrior build_seg_prior(std::size_t n, std::size_t k_max, std::optional<LengthBounds> bounds) {
  if (n == 0) throw ConfigError("sequence length must be at least 1");
  if (k_max < 1 || k_max > n)
    throw ConfigError("k_max must lie in [1, n] (k_max=" + std::to_string(k_max) +
                      ", n=" + std::to_string(n) + ")");
  LengthBounds b = bounds.value_or(LengthBounds{});
  if (b.max_length == 0) b.max_length = n;
  if (b.min_length < 1 || b.min_length > b.max_length || b.max_length > n)
    throw ConfigError("length bounds must satisfy 1 <= min <= max <= n");

  SegPrior prior;
  prior.n_ = n;
  prior.k_max_ = k_max;
  prior.min_length_ = b.min_length;
  prior.max_length_ = b.max_length;
  prior.log_counts_ = prior.bounded()
                          ? detail::log_counts_by_last_segment(n, k_max, b.min_length, b.max_length)
                          : log_binomial_counts(n, k_max);
  return prior;
}

double log_prior_num_segments(const SegPrior& prior, std::size_t k) {
  if (k < 1 || k > prior.k_max())
    throw DomainError("number of segments " + std::to_string(k) + " outside 1..k_max");
  return -std::log(static_cast<double>(prior.k_max()));
}

double log_prior_segmentation(const SegPrior& prior, const Segmentation& a) {
  const std::size_t k = a.num_segments();
  if (k < 1 || k > prior.k_max()) return kLogZero;
  if (!a.is_valid(prior.n(), prior.min_length(), prior.max_length())) return kLogZero;
  return log_prior_num_segments(prior, k) - prior.log_count(prior.n(), k);
}

}  // namespace bayescp
