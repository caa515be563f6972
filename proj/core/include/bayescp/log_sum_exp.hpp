#pragma once

#include <limits>
#include <span>

namespace bayescp {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(sum_i exp(terms[i])), evaluated as c + log(sum_i exp(terms[i] - c))
// with c the largest term so the dominant terms keep full precision.
// Returns kLogZero when every term is kLogZero; throws DomainError on an
// empty span.
double log_sum_exp(std::span<const double> terms);

// log(exp(a) + exp(b)).
double log_add_exp(double a, double b) noexcept;

}  // namespace bayescp
