#include <algorithm>
#include <cmath>
#include <string>

#include "bayescp/errors.hpp"
#include "bayescp/inference.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp {

namespace {

// best[k-1][i]: max over segmentations of 1..i into k segments of the
// summed log evidence; from[k-1][i]: the last changepoint before i.
struct MaxProduct {
  std::size_t width = 0;
  std::vector<double> best;
  std::vector<std::size_t> from;

  double at(std::size_t i, std::size_t k) const { return best[(k - 1) * width + i]; }
};

MaxProduct max_product(const ForwardTable& table, std::size_t k_top) {
  const SegPrior& prior = table.prior();
  const std::size_t n = table.n();
  MaxProduct mp;
  mp.width = n + 1;
  mp.best.assign(k_top * mp.width, kLogZero);
  mp.from.assign(k_top * mp.width, 0);
  for (std::size_t i = prior.min_length(); i <= std::min(prior.max_length(), n); ++i)
    mp.best[i] = table.log_seg1(0, i);

  for (std::size_t k = 2; k <= k_top; ++k) {
    const double* prev = &mp.best[(k - 2) * mp.width];
    double* row = &mp.best[(k - 1) * mp.width];
    std::size_t* arg = &mp.from[(k - 1) * mp.width];
    for (std::size_t i = k * prior.min_length(); i <= n; ++i) {
      const std::size_t j_lo = i > prior.max_length() ? i - prior.max_length() : 0;
      const std::size_t j_hi = i - prior.min_length();
      for (std::size_t j = j_lo; j <= j_hi; ++j) {
        if (prev[j] == kLogZero) continue;
        const double v = prev[j] + table.log_seg1(j, i);
        if (v > row[i]) {
          row[i] = v;
          arg[i] = j;
        }
      }
    }
  }
  return mp;
}

MapResult backtrace(const ForwardTable& table, const MaxProduct& mp, std::size_t k) {
  const SegPrior& prior = table.prior();
  const std::size_t n = table.n();
  std::vector<std::size_t> cps(k);
  std::size_t i = n;
  for (std::size_t t = k; t >= 1; --t) {
    cps[t - 1] = i;
    if (t > 1) i = mp.from[(t - 1) * mp.width + i];
  }
  MapResult result;
  result.segmentation = Segmentation{std::move(cps)};
  result.log_posterior = log_prior_num_segments(prior, k) + mp.at(n, k) - prior.log_count(n, k) -
                         log_marginal_evidence(table);
  return result;
}

}  // namespace

MapResult map_segmentation(const ForwardTable& table) {
  const SegPrior& prior = table.prior();
  const std::size_t n = table.n();
  const MaxProduct mp = max_product(table, prior.k_max());

  std::size_t best_k = 0;
  double best_score = kLogZero;
  for (std::size_t k = 1; k <= prior.k_max(); ++k) {
    const double count = prior.log_count(n, k);
    const double v = mp.at(n, k);
    if (count == kLogZero || v == kLogZero) continue;
    const double score = v - count;
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  if (best_k == 0) throw ModelError("no admissible segmentation");
  return backtrace(table, mp, best_k);
}

MapResult map_segmentation(const ForwardTable& table, std::size_t k) {
  if (k < 1 || k > table.k_max()) throw ConfigError("segment count outside 1..k_max");
  const MaxProduct mp = max_product(table, k);
  if (table.prior().log_count(table.n(), k) == kLogZero || mp.at(table.n(), k) == kLogZero)
    throw ModelError("no admissible segmentation with " + std::to_string(k) + " segments");
  return backtrace(table, mp, k);
}

std::size_t modal_num_segments(const ForwardTable& table) {
  const auto log_pk = log_posterior_num_segments(table);
  return static_cast<std::size_t>(std::max_element(log_pk.begin(), log_pk.end()) - log_pk.begin()) + 1;
}

}  // namespace bayescp
