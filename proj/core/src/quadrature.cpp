#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "bayescp/errors.hpp"
#include "bayescp/oracle.hpp"

namespace bayescp::oracle {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

// Log of likelihood x prior density at (location, t = log sigma^2),
// including the Jacobian of sigma^2 = e^t. "location" is mu for the iid
// model and beta for AR(1).
class LogIntegrand {
 public:
  LogIntegrand(const Hyperparams& theta, std::span<const double> window)
      : theta_(theta), window_(window.begin(), window.end()) {
    for (double y : window_) {
      if (!is_missing(y)) ++observed_;
    }
    prior_const_ = 0.5 * theta_.nu0 * std::log(0.5 * theta_.nu0) -
                   boost::math::lgamma(0.5 * theta_.nu0) +
                   0.5 * theta_.nu0 * std::log(theta_.sigma0_sq);
  }

  std::size_t observed() const { return observed_; }

  double operator()(double location, double t) const {
    const double var = std::exp(t);
    const double m = static_cast<double>(observed_);
    double rss = 0.0;
    if (theta_.variant == ModelVariant::kIidNormal) {
      for (double y : window_) {
        if (!is_missing(y)) rss += (y - location) * (y - location);
      }
    } else {
      double prev = kMissing;
      for (double y : window_) {
        if (is_missing(y)) {
          prev = kMissing;
          continue;
        }
        const double e = is_missing(prev) ? y : y - location * prev;
        rss += e * e;
        prev = y;
      }
    }
    const double dev = location - theta_.mu0;
    const double likelihood = -0.5 * m * (kLog2Pi + t) - rss / (2.0 * var);
    const double location_prior =
        -0.5 * (kLog2Pi + t - std::log(theta_.k0)) - theta_.k0 * dev * dev / (2.0 * var);
    const double variance_prior = prior_const_ - (0.5 * theta_.nu0 + 1.0) * t -
                                  theta_.nu0 * theta_.sigma0_sq / (2.0 * var);
    return likelihood + location_prior + variance_prior + t;
  }

  // Conditional mode of the location, which does not depend on sigma^2,
  // and the matching curvature weight: the exponent is
  // -weight (location - mode)^2 / (2 sigma^2) + const.
  std::pair<double, double> location_mode() const {
    if (theta_.variant == ModelVariant::kIidNormal) {
      double sum = 0.0;
      for (double y : window_) {
        if (!is_missing(y)) sum += y;
      }
      const double weight = theta_.k0 + static_cast<double>(observed_);
      return {(theta_.k0 * theta_.mu0 + sum) / weight, weight};
    }
    double xx = 0.0;
    double xy = 0.0;
    double prev = kMissing;
    for (double y : window_) {
      if (!is_missing(y) && !is_missing(prev)) {
        xx += prev * prev;
        xy += prev * y;
      }
      prev = y;
    }
    const double weight = theta_.k0 + xx;
    return {(theta_.k0 * theta_.mu0 + xy) / weight, weight};
  }

 private:
  Hyperparams theta_;
  std::vector<double> window_;
  std::size_t observed_ = 0;
  double prior_const_ = 0.0;
};

}  // namespace

double quadrature_evidence(const Hyperparams& theta, std::span<const double> window) {
  using boost::math::quadrature::gauss_kronrod;
  theta.validate();
  if (window.size() > 50) throw OracleScaleError("quadrature limited to windows of length <= 50");

  const LogIntegrand log_f(theta, window);
  if (log_f.observed() == 0) return 0.0;

  const auto [mode, weight] = log_f.location_mode();
  const auto peak = boost::math::tools::brent_find_minima(
      [&](double t) { return -log_f(mode, t); }, -60.0, 60.0, 52);
  const double t_hat = peak.first;
  const double log_scale = -peak.second;

  constexpr double kInnerHalfWidth = 14.0;  // standard deviations
  constexpr double kTolerance = 1e-11;
  // Largest absolute inner error, in units of exp(log_scale); bounded
  // against the total once the outer integral is known.
  double inner_error = 0.0;
  auto inner = [&](double t) {
    const double width = std::sqrt(std::exp(t) / weight);
    double err = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(
        [&](double x) { return std::exp(log_f(mode + x * width, t) - log_scale); },
        -kInnerHalfWidth, kInnerHalfWidth, 12, kTolerance, &err);
    inner_error = std::max(inner_error, err * width);
    return value * width;
  };

  // The marginal in t decays doubly exponentially to the left and at rate
  // (nu0 + m)/2 to the right.
  const double right_rate = 0.5 * (theta.nu0 + static_cast<double>(log_f.observed()));
  const double lo = t_hat - 40.0;
  const double hi = t_hat + 90.0 / right_rate + 20.0;
  double err = 0.0;
  double l1 = 0.0;
  const double value =
      gauss_kronrod<double, 61>::integrate(inner, lo, hi, 15, kTolerance, &err, &l1);

  if (!(value > 0.0) || !std::isfinite(value) || err > 1e-8 * value ||
      inner_error * (hi - lo) > 1e-8 * value)
    throw OracleNumericsError("evidence quadrature did not reach its error target");
  return log_scale + std::log(value);
}

}  // namespace bayescp::oracle
