#include "bayescp/log_sum_exp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "bayescp/errors.hpp"

namespace bayescp {

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw DomainError("log_sum_exp of an empty list");
  const double c = *std::max_element(terms.begin(), terms.end());
  if (c == kLogZero) return kLogZero;
  if (std::isinf(c)) return c;
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - c);
  return c + std::log(acc);
}

double log_add_exp(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace bayescp
