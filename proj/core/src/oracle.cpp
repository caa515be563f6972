#include "bayescp/oracle.hpp"

#include <cmath>

#include "bayescp/errors.hpp"
#include "bayescp/evidence.hpp"
#include "bayescp/log_sum_exp.hpp"

namespace bayescp::oracle {

namespace {

// Lexicographic order comparing from the last changepoint backwards.
bool reverse_lex_less(const Segmentation& a, const Segmentation& b) {
  auto ia = a.changepoints.rbegin();
  auto ib = b.changepoints.rbegin();
  for (; ia != a.changepoints.rend() && ib != b.changepoints.rend(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return a.changepoints.size() < b.changepoints.size();
}

void extend(std::size_t n, std::size_t k_max, std::size_t lo, std::size_t hi,
            std::vector<std::size_t>& current, std::vector<Segmentation>& out) {
  const std::size_t last = current.empty() ? 0 : current.back();
  if (current.size() >= k_max) return;
  for (std::size_t len = lo; len <= hi && last + len <= n; ++len) {
    current.push_back(last + len);
    if (current.back() == n) {
      out.push_back(Segmentation{current});
    } else {
      extend(n, k_max, lo, hi, current, out);
    }
    current.pop_back();
  }
}

}  // namespace

std::vector<Segmentation> enumerate_segmentations(std::size_t n, std::size_t k_max,
                                                  std::size_t min_length,
                                                  std::size_t max_length) {
  if (max_length == 0) max_length = n;
  std::vector<Segmentation> out;
  std::vector<std::size_t> current;
  extend(n, k_max, min_length, max_length, current, out);
  return out;
}

EnumeratedPosterior enumerate_posterior(const ObservedSequence& seq,
                                        std::span<const Hyperparams> thetas,
                                        const SegPrior& prior) {
  const std::size_t n = seq.size();
  const std::size_t k_max = prior.k_max();
  if (n > 14 || k_max > 4) throw OracleScaleError("enumeration limited to n <= 14, k_max <= 4");
  if (prior.n() != n) throw ConfigError("prior and sequence disagree on n");

  EnumeratedPosterior out;
  out.segmentations =
      enumerate_segmentations(n, k_max, prior.min_length(), prior.max_length());
  if (out.segmentations.empty()) throw ModelError("no admissible segmentation");

  std::vector<double> count_by_k(k_max, 0.0);
  for (const auto& a : out.segmentations) count_by_k[a.num_segments() - 1] += 1.0;

  // Summed evidence left to right, segment by segment.
  std::vector<double> evidence_sum;
  evidence_sum.reserve(out.segmentations.size());
  for (const auto& a : out.segmentations) {
    double acc = 0.0;
    for (std::size_t t = 0; t < a.num_segments(); ++t) {
      const auto [begin, end] = a.segment(t);
      const double ev = segment_log_evidence_multi(seq, thetas, begin, end);
      acc = t == 0 ? ev : acc + ev;
    }
    evidence_sum.push_back(acc);
  }

  const double log_pk = -std::log(static_cast<double>(k_max));
  out.log_joint.reserve(out.segmentations.size());
  double best_score = kLogZero;
  for (std::size_t s = 0; s < out.segmentations.size(); ++s) {
    const Segmentation& a = out.segmentations[s];
    const double log_count = std::log(count_by_k[a.num_segments() - 1]);
    out.log_joint.push_back(log_pk - log_count + evidence_sum[s]);

    const double score = evidence_sum[s] - log_count;
    const Segmentation& incumbent = out.segmentations[out.map_index];
    const bool better =
        s == 0 || score > best_score ||
        (score == best_score &&
         (a.num_segments() < incumbent.num_segments() ||
          (a.num_segments() == incumbent.num_segments() && reverse_lex_less(a, incumbent))));
    if (better) {
      best_score = score;
      out.map_index = s;
    }
  }

  out.log_evidence = log_sum_exp(out.log_joint);
  out.log_posterior.reserve(out.log_joint.size());
  for (double lj : out.log_joint) out.log_posterior.push_back(lj - out.log_evidence);

  out.changepoint_marginals.assign(n - 1, 0.0);
  for (std::size_t s = 0; s < out.segmentations.size(); ++s) {
    const double p = std::exp(out.log_posterior[s]);
    const auto& cps = out.segmentations[s].changepoints;
    for (std::size_t t = 0; t + 1 < cps.size(); ++t) out.changepoint_marginals[cps[t] - 1] += p;
  }
  out.log_posterior_k.resize(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    if (count_by_k[k] == 0.0) {
      out.log_posterior_k[k] = kLogZero;
      continue;
    }
    std::vector<double> terms;
    for (std::size_t s = 0; s < out.segmentations.size(); ++s) {
      if (out.segmentations[s].num_segments() == k + 1) terms.push_back(out.log_posterior[s]);
    }
    out.log_posterior_k[k] = log_sum_exp(terms);
  }
  return out;
}

EnumeratedPosterior enumerate_posterior(const ObservedSequence& seq, const Hyperparams& theta,
                                        const SegPrior& prior) {
  const std::vector<Hyperparams> thetas(seq.num_tracks(), theta);
  return enumerate_posterior(seq, thetas, prior);
}

}  // namespace bayescp::oracle
