#include "bayescp/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bayescp/errors.hpp"

namespace bayescp {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t dim = start.size();
  if (dim == 0) throw DomainError("nelder_mead needs at least one coordinate");
  std::vector<double> step = options.initial_step;
  if (step.empty()) step.assign(dim, 1.0);
  if (step.size() != dim) throw DomainError("initial_step size does not match the start point");

  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t d = 0; d < dim; ++d) simplex[d + 1][d] += step[d];
  std::vector<double> values(dim + 1);
  for (std::size_t v = 0; v <= dim; ++v) values[v] = eval(simplex[v]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  auto point_along = [&](double coef, std::vector<double>& out, const std::vector<double>& worst) {
    for (std::size_t d = 0; d < dim; ++d) out[d] = centroid[d] + coef * (worst[d] - centroid[d]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (std::isfinite(values[worst]) &&
        values[worst] - values[best] <= options.reltol * (std::abs(values[best]) + options.reltol)) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= options.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[v][d] / static_cast<double>(dim);
    }

    point_along(-1.0, trial, simplex[worst]);
    const double reflected = eval(trial);
    if (reflected < values[best]) {
      point_along(-2.0, trial2, simplex[worst]);
      const double expanded = eval(trial2);
      if (expanded < reflected) {
        simplex[worst] = trial2;
        values[worst] = expanded;
      } else {
        simplex[worst] = trial;
        values[worst] = reflected;
      }
      continue;
    }
    if (reflected < values[second_worst]) {
      simplex[worst] = trial;
      values[worst] = reflected;
      continue;
    }

    // Contraction, outside when the reflection improved on the worst point.
    const bool outside = reflected < values[worst];
    point_along(outside ? -0.5 : 0.5, trial2, simplex[worst]);
    const double contracted = eval(trial2);
    if (contracted < (outside ? reflected : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }

    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == best) continue;
      for (std::size_t d = 0; d < dim; ++d)
        simplex[v][d] = simplex[best][d] + 0.5 * (simplex[v][d] - simplex[best][d]);
      values[v] = eval(simplex[v]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  const auto best = static_cast<std::size_t>(best_it - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace bayescp
