#include "bayescp/evidence_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "bayescp/errors.hpp"

namespace bayescp {

EvidenceKernel::EvidenceKernel(const ObservedSequence& seq, const Hyperparams& theta)
    : EvidenceKernel(seq, std::vector<Hyperparams>(seq.num_tracks(), theta)) {}

EvidenceKernel::EvidenceKernel(const ObservedSequence& seq, std::vector<Hyperparams> thetas)
    : seq_(seq), thetas_(std::move(thetas)), n_(seq.size()) {
  if (thetas_.size() != seq_.num_tracks())
    throw DomainError("need one hyperparameter set per replica track");
  for (const auto& theta : thetas_) {
    theta.validate();
    if (theta.variant != thetas_.front().variant)
      throw DomainError("all replica tracks must use the same model variant");
  }

  tracks_.reserve(seq_.num_tracks());
  for (std::size_t r = 0; r < seq_.num_tracks(); ++r) {
    const auto y = seq_.track(r);
    TrackTables t;
    t.index = r;
    t.theta = thetas_[r];
    t.prior_scale = t.theta.nu0 * t.theta.sigma0_sq;

    if (t.theta.variant == ModelVariant::kIidNormal) {
      double total = 0.0;
      std::size_t m = 0;
      for (double v : y) {
        if (!is_missing(v)) {
          total += v;
          ++m;
        }
      }
      t.shift = m > 0 ? total / static_cast<double>(m) : 0.0;
    }
    t.mu0_shifted = t.theta.mu0 - t.shift;

    for (auto* v : {&t.count, &t.sum, &t.sum_sq, &t.noise_sq, &t.pair_xx, &t.pair_xy, &t.pair_yy})
      v->assign(n_ + 1, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      t.count[i + 1] = t.count[i];
      t.sum[i + 1] = t.sum[i];
      t.sum_sq[i + 1] = t.sum_sq[i];
      t.noise_sq[i + 1] = t.noise_sq[i];
      t.pair_xx[i + 1] = t.pair_xx[i];
      t.pair_xy[i + 1] = t.pair_xy[i];
      t.pair_yy[i + 1] = t.pair_yy[i];
      if (is_missing(y[i])) continue;
      const double c = y[i] - t.shift;
      t.count[i + 1] += 1.0;
      t.sum[i + 1] += c;
      t.sum_sq[i + 1] += c * c;
      if (i == 0 || is_missing(y[i - 1])) {
        t.noise_sq[i + 1] += y[i] * y[i];
      } else {
        t.pair_xx[i + 1] += y[i - 1] * y[i - 1];
        t.pair_xy[i + 1] += y[i - 1] * y[i];
        t.pair_yy[i + 1] += y[i] * y[i];
      }
    }

    const double k0 = t.theta.k0;
    const double nu0 = t.theta.nu0;
    const double base = -boost::math::lgamma(0.5 * nu0) + 0.5 * nu0 * std::log(t.prior_scale);
    t.log_const.resize(n_ + 1);
    t.half_nu.resize(n_ + 1);
    t.shrink.resize(n_ + 1);
    for (std::size_t m = 0; m <= n_; ++m) {
      const double md = static_cast<double>(m);
      t.half_nu[m] = 0.5 * (nu0 + md);
      t.shrink[m] = k0 * md / (k0 + md);
      double c = base - 0.5 * md * std::log(std::numbers::pi) + boost::math::lgamma(t.half_nu[m]);
      if (t.theta.variant == ModelVariant::kIidNormal)
        c += 0.5 * (std::log(k0) - std::log(k0 + md));
      t.log_const[m] = c;
    }
    tracks_.push_back(std::move(t));
  }
}

void EvidenceKernel::check_window(std::size_t begin, std::size_t end) const {
  if (begin >= end || end > n_)
    throw WindowError("window [" + std::to_string(begin) + ", " + std::to_string(end) +
                      ") outside sequence of length " + std::to_string(n_));
}

double EvidenceKernel::track_evidence(const TrackTables& t, std::size_t begin,
                                      std::size_t end) const {
  const auto m = static_cast<std::size_t>(t.count[end] - t.count[begin]);
  if (m == 0) return 0.0;

  if (t.theta.variant == ModelVariant::kIidNormal) {
    const double md = static_cast<double>(m);
    const double s = t.sum[end] - t.sum[begin];
    const double q = t.sum_sq[end] - t.sum_sq[begin];
    const double mean = s / md;
    const double sq_dev = std::max(0.0, q - s * mean);
    const double dev = mean - t.mu0_shifted;
    const double scale = t.prior_scale + sq_dev + t.shrink[m] * dev * dev;
    return t.log_const[m] - t.half_nu[m] * std::log(scale);
  }

  // AR(1): the window's first position enters as noise even when its
  // predecessor outside the window was observed.
  const double first = seq_.track(t.index)[begin];
  double noise = t.noise_sq[end] - t.noise_sq[begin + 1];
  if (!is_missing(first)) noise += first * first;
  const double xx = t.pair_xx[end] - t.pair_xx[begin + 1];
  const double xy = t.pair_xy[end] - t.pair_xy[begin + 1];
  const double yy = t.pair_yy[end] - t.pair_yy[begin + 1];
  const double k0 = t.theta.k0;
  const double beta0 = t.theta.mu0;
  const double k_n = k0 + xx;
  const double shifted = k0 * beta0 + xy;
  const double residual = std::max(0.0, noise + yy + k0 * beta0 * beta0 - shifted * shifted / k_n);
  return t.log_const[m] + 0.5 * (std::log(k0) - std::log(k_n)) -
         t.half_nu[m] * std::log(t.prior_scale + residual);
}

double EvidenceKernel::log_evidence(std::size_t begin, std::size_t end) const {
  check_window(begin, end);
  double total = 0.0;
  for (const auto& t : tracks_) total += track_evidence(t, begin, end);
  return total;
}

double EvidenceKernel::log_evidence(std::size_t track, std::size_t begin, std::size_t end) const {
  check_window(begin, end);
  return track_evidence(tracks_.at(track), begin, end);
}

SufficientStats EvidenceKernel::stats(std::size_t track, std::size_t begin, std::size_t end) const {
  check_window(begin, end);
  const TrackTables& t = tracks_.at(track);
  const auto y = seq_.track(track);

  SufficientStats s;
  s.length = end - begin;
  s.count = static_cast<std::size_t>(t.count[end] - t.count[begin]);
  s.first_value = y[begin];
  s.last_value = y[end - 1];
  if (s.count > 0) {
    const double md = static_cast<double>(s.count);
    const double sum = t.sum[end] - t.sum[begin];
    const double local_mean = sum / md;
    s.mean = t.shift + local_mean;
    s.sq_dev = std::max(0.0, (t.sum_sq[end] - t.sum_sq[begin]) - sum * local_mean);
  }
  s.noise_sq = t.noise_sq[end] - t.noise_sq[begin + 1];
  if (!is_missing(y[begin])) s.noise_sq += y[begin] * y[begin];
  s.sum_xx = t.pair_xx[end] - t.pair_xx[begin + 1];
  s.sum_xy = t.pair_xy[end] - t.pair_xy[begin + 1];
  s.sum_yy = t.pair_yy[end] - t.pair_yy[begin + 1];
  return s;
}

}  // namespace bayescp
