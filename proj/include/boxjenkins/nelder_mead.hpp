#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace boxjenkins {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double tolerance = 1e-8;  // stop once every vertex is this close (max-norm) to the best one
  std::size_t max_evaluations = 5000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Downhill simplex minimisation. `f` may return +infinity to mark points
/// outside the feasible region; the starting point must be feasible.
/// Standard coefficients: reflection 1, expansion 2, contraction 1/2, shrink 1/2.
template <class Objective>
[[nodiscard]] NelderMeadResult nelder_mead(Objective&& f, std::vector<double> start, const NelderMeadOptions& opts = {}) {
  const std::size_t dim = start.size();
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  if (dim == 0) {
    result.x = std::move(start);
    result.value = eval(result.x);
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> simplex(dim + 1, start);
  std::vector<double> values(dim + 1);
  values[0] = eval(start);
  for (std::size_t i = 0; i < dim; ++i) {
    const double base = opts.initial_step * std::max(1.0, std::abs(start[i]));
    // Prefer a feasible vertex: try +step, -step, then halve.
    double step = base;
    for (int attempt = 0; attempt < 20; ++attempt) {
      simplex[i + 1] = start;
      simplex[i + 1][i] = start[i] + step;
      values[i + 1] = eval(simplex[i + 1]);
      if (std::isfinite(values[i + 1])) break;
      simplex[i + 1][i] = start[i] - step;
      values[i + 1] = eval(simplex[i + 1]);
      if (std::isfinite(values[i + 1])) break;
      step *= 0.5;
    }
  }

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim);
  std::vector<double> trial(dim);
  std::vector<double> trial2(dim);

  auto diameter = [&](std::size_t best) {
    double d = 0.0;
    for (std::size_t v = 0; v <= dim; ++v) {
      for (std::size_t i = 0; i < dim; ++i) d = std::max(d, std::abs(simplex[v][i] - simplex[best][i]));
    }
    return d;
  };

  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (diameter(best) < opts.tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= opts.max_evaluations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v][i];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t i = 0; i < dim; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
    const double reflected = eval(trial);

    if (reflected < values[best]) {
      for (std::size_t i = 0; i < dim; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - simplex[worst][i]);
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

    const bool outside = reflected < values[worst];
    for (std::size_t i = 0; i < dim; ++i) {
      trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                          : centroid[i] + 0.5 * (simplex[worst][i] - centroid[i]);
    }
    const double contracted = eval(trial2);
    if (contracted < (outside ? reflected : values[worst])) {
      simplex[worst] = trial2;
      values[worst] = contracted;
      continue;
    }

    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == best) continue;
      for (std::size_t i = 0; i < dim; ++i) simplex[v][i] = simplex[best][i] + 0.5 * (simplex[v][i] - simplex[best][i]);
      values[v] = eval(simplex[v]);
    }
  }

  const std::size_t best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace boxjenkins
