#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "beliefapprox/error.hpp"

namespace beliefapprox {

// Derivative-free downhill simplex (Nelder-Mead) for small unconstrained problems.

struct SimplexSearchOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double parameter_tolerance = 1e-8;  // max coordinate distance of any vertex from the best
  double value_tolerance = 1e-10;     // worst minus best objective
  std::size_t max_iterations = 2000;
  std::vector<double> initial_steps;  // per coordinate; empty means 0.25 * max(1, |x_i|)
};

struct SimplexSearchResult {
  std::vector<double> best;
  double value = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
  double final_diameter = std::numeric_limits<double>::infinity();
};

template <typename Objective>
SimplexSearchResult simplex_search(Objective&& objective, const std::vector<double>& start,
                                   const SimplexSearchOptions& options = {}) {
  const std::size_t dim = start.size();
  if (dim == 0) throw ValidationError("simplex search: empty parameter vector");
  if (!options.initial_steps.empty() && options.initial_steps.size() != dim)
    throw ValidationError("simplex search: initial steps do not match the dimension");

  // NaN compares false everywhere; treat it as the worst possible value.
  auto eval = [&](const std::vector<double>& x) {
    const double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> vertices(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) {
    const double step =
        options.initial_steps.empty() ? 0.25 * std::max(1.0, std::abs(start[i])) : options.initial_steps[i];
    vertices[i + 1][i] += step;
  }
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(vertices[i]);

  std::vector<std::size_t> order(dim + 1);
  auto sort_vertices = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> v2(dim + 1);
    std::vector<double> f2(dim + 1);
    for (std::size_t k = 0; k <= dim; ++k) {
      v2[k] = std::move(vertices[order[k]]);
      f2[k] = values[order[k]];
    }
    vertices.swap(v2);
    values.swap(f2);
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t k = 1; k <= dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) d = std::max(d, std::abs(vertices[k][i] - vertices[0][i]));
    return d;
  };
  auto along = [&](const std::vector<double>& from, const std::vector<double>& to, double t) {
    std::vector<double> x(dim);
    for (std::size_t i = 0; i < dim; ++i) x[i] = from[i] + t * (to[i] - from[i]);
    return x;
  };

  SimplexSearchResult result;
  std::size_t iter = 0;
  for (;; ++iter) {
    sort_vertices();
    const double spread = values[dim] - values[0];
    result.final_diameter = diameter();
    if (result.final_diameter < options.parameter_tolerance && spread < options.value_tolerance) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iterations) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += vertices[k][i];
    for (double& c : centroid) c /= static_cast<double>(dim);

    const auto& worst = vertices[dim];
    auto reflected = along(centroid, worst, -options.reflection);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[0]) {
      auto expanded = along(centroid, reflected, options.expansion);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertices[dim] = std::move(expanded);
        values[dim] = f_expanded;
      } else {
        vertices[dim] = std::move(reflected);
        values[dim] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[dim - 1]) {
      vertices[dim] = std::move(reflected);
      values[dim] = f_reflected;
      continue;
    }

    bool accepted = false;
    if (f_reflected < values[dim]) {
      auto outside = along(centroid, reflected, options.contraction);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        vertices[dim] = std::move(outside);
        values[dim] = f_outside;
        accepted = true;
      }
    } else {
      auto inside = along(centroid, worst, options.contraction);
      const double f_inside = eval(inside);
      if (f_inside < values[dim]) {
        vertices[dim] = std::move(inside);
        values[dim] = f_inside;
        accepted = true;
      }
    }
    if (accepted) continue;

    for (std::size_t k = 1; k <= dim; ++k) {
      vertices[k] = along(vertices[0], vertices[k], options.shrink);
      values[k] = eval(vertices[k]);
    }
  }

  result.best = vertices[0];
  result.value = values[0];
  result.iterations = iter;
  return result;
}

} // namespace beliefapprox
