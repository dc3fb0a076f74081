#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beliefapprox/error.hpp"

namespace beliefapprox {

enum class IntegrationRule { simpson, trapezoid };

inline std::string_view to_string(IntegrationRule rule) {
  return rule == IntegrationRule::simpson ? "simpson" : "trapezoid";
}

inline IntegrationRule integration_rule_from_string(std::string_view name) {
  if (name == "simpson") return IntegrationRule::simpson;
  if (name == "trapezoid") return IntegrationRule::trapezoid;
  throw ValidationError("unknown integration rule '" + std::string(name) + "'");
}

// n points evenly spaced on [lo, hi], endpoints exact.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n < 2) throw ValidationError("linspace needs at least 2 points");
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

inline bool is_uniform_grid(std::span<const double> grid) {
  if (grid.size() < 2) return false;
  const double span = grid.back() - grid.front();
  const double h = span / static_cast<double>(grid.size() - 1);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs((grid[i] - grid[i - 1]) - h) > 1e-9 * std::abs(span)) return false;
  }
  return true;
}

/// Quadrature weights such that sum_i w[i] * f(grid[i]) approximates the
/// integral of f over [grid.front(), grid.back()].
///
/// Simpson requires a uniform grid. With an odd number of intervals the last
/// three intervals use Simpson's 3/8 rule; two points fall back to the
/// trapezoid. The trapezoid rule accepts any strictly increasing grid.
inline std::vector<double> quadrature_weights(std::span<const double> grid, IntegrationRule rule) {
  const std::size_t n = grid.size();
  if (n < 2) throw ValidationError("quadrature grid needs at least 2 points");
  std::vector<double> w(n, 0.0);

  if (rule == IntegrationRule::trapezoid || n == 2) {
    for (std::size_t i = 1; i < n; ++i) {
      const double half = 0.5 * (grid[i] - grid[i - 1]);
      w[i - 1] += half;
      w[i] += half;
    }
    return w;
  }

  if (!is_uniform_grid(grid)) throw ValidationError("simpson rule requires a uniform grid");
  const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
  const std::size_t intervals = n - 1;
  const std::size_t simpson_intervals = intervals % 2 == 0 ? intervals : intervals - 3;

  for (std::size_t i = 0; i + 2 <= simpson_intervals; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (simpson_intervals != intervals) {
    const std::size_t k = simpson_intervals;
    const double c = 3.0 * h / 8.0;
    w[k] += c;
    w[k + 1] += 3.0 * c;
    w[k + 2] += 3.0 * c;
    w[k + 3] += c;
  }
  return w;
}

inline double integrate(std::span<const double> weights, std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) sum += weights[i] * values[i];
  return sum;
}

} // namespace beliefapprox
