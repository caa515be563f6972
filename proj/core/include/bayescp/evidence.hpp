#pragma once

#include <cstddef>
#include <span>

#include "bayescp/hyperparams.hpp"
#include "bayescp/sequence.hpp"

namespace bayescp {

// Sufficient statistics of one contiguous window of a single track.
//
// The iid fields are kept as (count, mean, sum of squared deviations)
// rather than raw power sums so that long windows with a large offset do
// not lose precision.
//
// AR(1) fields treat the first observation of the window, and every
// observation whose predecessor is missing, as pure noise; every other
// observation is a regression target on its predecessor.
struct SufficientStats {
  std::size_t length = 0;  // positions covered, missing ones included
  std::size_t count = 0;   // observed positions
  double mean = 0.0;
  double sq_dev = 0.0;

  double noise_sq = 0.0;  // sum of squares of noise-only observations
  double sum_xx = 0.0;    // sum y_{t-1}^2 over regression pairs
  double sum_xy = 0.0;    // sum y_{t-1} y_t
  double sum_yy = 0.0;    // sum y_t^2
  double first_value = kMissing;  // value at the window's first position
  double last_value = kMissing;   // value at the window's last position

  // Statistics of a window given its raw values (NaN = missing).
  static SufficientStats from_window(std::span<const double> window);

  double sum() const noexcept { return mean * static_cast<double>(count); }
};

// Statistics of the concatenation of two adjacent windows, `left` followed
// directly by `right`.
SufficientStats merge(const SufficientStats& left, const SufficientStats& right);

// Conjugate posterior of a segment's (mu, sigma^2) in normal-inverse-chi^2
// form, with nu_sigma_sq_n holding the product nu_n * sigma_n^2.
struct PosteriorParams {
  double mu_n = 0.0;
  double k_n = 0.0;
  double nu_n = 0.0;
  double nu_sigma_sq_n = 0.0;

  // Hyperparameters equal to this posterior, for chaining updates.
  Hyperparams as_prior() const;
};

// Requires theta.variant == kIidNormal (DomainError otherwise).
PosteriorParams posterior_update(const Hyperparams& theta, const SufficientStats& stats);

// log p(window | one segment, theta) with the segment parameters integrated
// out. Windows without observations have log evidence exactly 0.
double segment_log_evidence(const Hyperparams& theta, const SufficientStats& stats);
double segment_log_evidence(const Hyperparams& theta, std::span<const double> window);

// Zero-mean AR(1) evidence of a raw window; theta.variant must be kAr1.
double segment_log_evidence_ar1(const Hyperparams& theta, std::span<const double> window);

// Sum over replica tracks of the single-track evidence of positions
// begin+1..end, recomputed directly from the raw values.
double segment_log_evidence_multi(const ObservedSequence& seq,
                                  std::span<const Hyperparams> thetas,
                                  std::size_t begin, std::size_t end);

namespace detail {

// Closed form shared by both variants once the posterior scale is known:
//   -(m/2) log pi + 1/2 log(k0/k_n) + lgamma(nu_n/2) - lgamma(nu0/2)
//   + (nu0/2) log(nu0 sigma0^2) - (nu_n/2) log(nu_n sigma_n^2)
double nix_log_marginal(double count, double k0, double k_n, double nu0, double sigma0_sq,
                        double nu_sigma_sq_n);

}  // namespace detail

}  // namespace bayescp
