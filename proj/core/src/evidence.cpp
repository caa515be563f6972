#include "bayescp/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "bayescp/errors.hpp"

namespace bayescp {

SufficientStats SufficientStats::from_window(std::span<const double> window) {
  SufficientStats s;
  s.length = window.size();
  if (window.empty()) return s;
  s.first_value = window.front();
  s.last_value = window.back();

  double sum = 0.0;
  for (double y : window) {
    if (is_missing(y)) continue;
    sum += y;
    ++s.count;
  }
  if (s.count == 0) return s;
  s.mean = sum / static_cast<double>(s.count);

  double prev = kMissing;
  for (double y : window) {
    if (is_missing(y)) {
      prev = kMissing;
      continue;
    }
    s.sq_dev += (y - s.mean) * (y - s.mean);
    if (is_missing(prev)) {
      s.noise_sq += y * y;
    } else {
      s.sum_xx += prev * prev;
      s.sum_xy += prev * y;
      s.sum_yy += y * y;
    }
    prev = y;
  }
  return s;
}

SufficientStats merge(const SufficientStats& left, const SufficientStats& right) {
  if (left.length == 0) return right;
  if (right.length == 0) return left;

  SufficientStats out;
  out.length = left.length + right.length;
  out.count = left.count + right.count;
  if (out.count > 0) {
    const double nl = static_cast<double>(left.count);
    const double nr = static_cast<double>(right.count);
    const double n = static_cast<double>(out.count);
    const double delta = right.mean - left.mean;
    out.mean = left.mean + delta * nr / n;
    out.sq_dev = left.sq_dev + right.sq_dev + delta * delta * nl * nr / n;
  }

  out.noise_sq = left.noise_sq + right.noise_sq;
  out.sum_xx = left.sum_xx + right.sum_xx;
  out.sum_xy = left.sum_xy + right.sum_xy;
  out.sum_yy = left.sum_yy + right.sum_yy;
  // The first observation of `right` stops being pure noise once its
  // predecessor is in the same window.
  if (!is_missing(left.last_value) && !is_missing(right.first_value)) {
    const double x = left.last_value;
    const double y = right.first_value;
    out.noise_sq -= y * y;
    out.sum_xx += x * x;
    out.sum_xy += x * y;
    out.sum_yy += y * y;
  }
  out.first_value = left.first_value;
  out.last_value = right.last_value;
  return out;
}

Hyperparams PosteriorParams::as_prior() const {
  Hyperparams theta;
  theta.mu0 = mu_n;
  theta.k0 = k_n;
  theta.nu0 = nu_n;
  theta.sigma0_sq = nu_sigma_sq_n / nu_n;
  return theta;
}

PosteriorParams posterior_update(const Hyperparams& theta, const SufficientStats& stats) {
  if (theta.variant != ModelVariant::kIidNormal)
    throw DomainError("posterior_update is defined for the iid normal model only");
  const double m = static_cast<double>(stats.count);
  PosteriorParams post;
  post.k_n = theta.k0 + m;
  post.nu_n = theta.nu0 + m;
  if (stats.count == 0) {
    post.mu_n = theta.mu0;
    post.nu_sigma_sq_n = theta.nu0 * theta.sigma0_sq;
    return post;
  }
  post.mu_n = (theta.k0 * theta.mu0 + m * stats.mean) / post.k_n;
  const double dev = stats.mean - theta.mu0;
  post.nu_sigma_sq_n =
      theta.nu0 * theta.sigma0_sq + stats.sq_dev + theta.k0 * m / post.k_n * dev * dev;
  return post;
}

namespace detail {

double nix_log_marginal(double count, double k0, double k_n, double nu0, double sigma0_sq,
                        double nu_sigma_sq_n) {
  const double nu_n = nu0 + count;
  return -0.5 * count * std::log(std::numbers::pi) + 0.5 * (std::log(k0) - std::log(k_n)) +
         boost::math::lgamma(0.5 * nu_n) - boost::math::lgamma(0.5 * nu0) +
         0.5 * nu0 * std::log(nu0 * sigma0_sq) - 0.5 * nu_n * std::log(nu_sigma_sq_n);
}

}  // namespace detail

namespace {

double iid_log_evidence(const Hyperparams& theta, const SufficientStats& stats) {
  const PosteriorParams post = posterior_update(theta, stats);
  return detail::nix_log_marginal(static_cast<double>(stats.count), theta.k0, post.k_n,
                                  theta.nu0, theta.sigma0_sq, post.nu_sigma_sq_n);
}

double ar1_log_evidence(const Hyperparams& theta, const SufficientStats& stats) {
  const double k_n = theta.k0 + stats.sum_xx;
  const double shifted = theta.k0 * theta.mu0 + stats.sum_xy;
  const double residual = std::max(
      0.0, stats.noise_sq + stats.sum_yy + theta.k0 * theta.mu0 * theta.mu0 - shifted * shifted / k_n);
  return detail::nix_log_marginal(static_cast<double>(stats.count), theta.k0, k_n, theta.nu0,
                                  theta.sigma0_sq, theta.nu0 * theta.sigma0_sq + residual);
}

}  // namespace

double segment_log_evidence(const Hyperparams& theta, const SufficientStats& stats) {
  if (stats.count == 0) return 0.0;
  switch (theta.variant) {
    case ModelVariant::kIidNormal:
      return iid_log_evidence(theta, stats);
    case ModelVariant::kAr1:
      return ar1_log_evidence(theta, stats);
  }
  throw DomainError("unknown model variant");
}

double segment_log_evidence(const Hyperparams& theta, std::span<const double> window) {
  return segment_log_evidence(theta, SufficientStats::from_window(window));
}

double segment_log_evidence_ar1(const Hyperparams& theta, std::span<const double> window) {
  if (theta.variant != ModelVariant::kAr1)
    throw DomainError("segment_log_evidence_ar1 requires the AR(1) variant");
  if (window.empty()) return 0.0;
  return ar1_log_evidence(theta, SufficientStats::from_window(window));
}

double segment_log_evidence_multi(const ObservedSequence& seq,
                                  std::span<const Hyperparams> thetas, std::size_t begin,
                                  std::size_t end) {
  if (begin >= end || end > seq.size())
    throw WindowError("window [" + std::to_string(begin) + ", " + std::to_string(end) +
                      ") outside sequence of length " + std::to_string(seq.size()));
  if (thetas.size() != seq.num_tracks())
    throw DomainError("need one hyperparameter set per replica track");
  double total = 0.0;
  for (std::size_t r = 0; r < seq.num_tracks(); ++r) {
    thetas[r].validate();
    total += segment_log_evidence(thetas[r], seq.track(r).subspan(begin, end - begin));
  }
  return total;
}

}  // namespace bayescp
