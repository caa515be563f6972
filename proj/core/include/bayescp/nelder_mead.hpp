#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bayescp {

struct NelderMeadOptions {
  // Stop once f_worst - f_best <= reltol * (|f_best| + reltol).
  double reltol = 1e-8;
  // Checked before each iteration, so the count may overshoot by up to
  // dim + 1.
  std::size_t max_evaluations = 500;
  // Initial simplex offsets per coordinate; defaults to 1 for every axis.
  std::vector<double> initial_step;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

// Derivative-free minimization. Non-finite function values are treated as
// +infinity, so constraints can be imposed by returning infinity.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace bayescp
