#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/quadrature.hpp"

namespace beliefapprox {

enum class EstimationLossKind { delta_mode, absolute_median, squared_mean };

inline std::string_view to_string(EstimationLossKind kind) {
  switch (kind) {
  case EstimationLossKind::delta_mode: return "mode";
  case EstimationLossKind::absolute_median: return "median";
  case EstimationLossKind::squared_mean: return "mean";
  }
  return "?";
}

/// A parameter-estimation loss L(sigma, s0) together with the recipe that
/// minimizes its expectation. The delta loss has no pointwise evaluation;
/// its expectation is -p(sigma).
struct EstimationLoss {
  EstimationLossKind kind;
  std::function<double(double, double)> eval;

  static EstimationLoss delta_mode() { return {EstimationLossKind::delta_mode, {}}; }
  static EstimationLoss absolute_median() {
    return {EstimationLossKind::absolute_median, [](double sigma, double s0) { return std::abs(sigma - s0); }};
  }
  static EstimationLoss squared_mean() {
    return {EstimationLossKind::squared_mean, [](double sigma, double s0) { return (sigma - s0) * (sigma - s0); }};
  }

  static EstimationLoss from_kind(EstimationLossKind kind) {
    switch (kind) {
    case EstimationLossKind::delta_mode: return delta_mode();
    case EstimationLossKind::absolute_median: return absolute_median();
    case EstimationLossKind::squared_mean: return squared_mean();
    }
    throw ValidationError("unknown estimation loss");
  }

  static EstimationLoss from_string(std::string_view name) {
    if (name == "mode") return delta_mode();
    if (name == "median") return absolute_median();
    if (name == "mean") return squared_mean();
    throw ValidationError("loss must be one of mode, median, mean (got '" + std::string(name) + "')");
  }
};

// Values within this relative distance of the maximum count as tied modes.
inline constexpr double kModeTieTolerance = 1e-12;
inline constexpr double kMedianProbabilityTolerance = 1e-10;

namespace detail {

// First index whose value is within the tie tolerance of the maximum.
inline std::size_t first_max_index(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= top - kModeTieTolerance * std::abs(top)) return i;
  }
  return 0;
}

template <typename F>
double golden_section_max(F&& f, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Modes of a Gaussian mixture lie between its smallest and largest component
// mean; scan that interval and polish each local maximum.
inline double mixture_mode(const Mixture1D& m) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : m.components()) {
    lo = std::min(lo, c.mean());
    hi = std::max(hi, c.mean());
  }
  if (!(hi > lo)) return lo;

  constexpr std::size_t kScan = 4097;
  const auto xs = linspace(lo, hi, kScan);
  std::vector<double> ls(kScan);
  for (std::size_t i = 0; i < kScan; ++i) ls[i] = m.log_pdf(xs[i]);

  std::vector<double> peaks;
  for (std::size_t i = 0; i < kScan; ++i) {
    const bool left_ok = i == 0 || ls[i] >= ls[i - 1];
    const bool right_ok = i + 1 == kScan || ls[i] >= ls[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double a = xs[i == 0 ? 0 : i - 1];
    const double b = xs[i + 1 == kScan ? i : i + 1];
    peaks.push_back(golden_section_max([&m](double s) { return m.log_pdf(s); }, a, b));
  }
  std::sort(peaks.begin(), peaks.end());
  std::vector<double> heights(peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) heights[i] = m.pdf(peaks[i]);
  return peaks[first_max_index(heights)];
}

template <typename Cdf>
double bisect_median(Cdf&& cdf, double lo, double hi) {
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = cdf(mid);
    if (std::abs(f - 0.5) <= kMedianProbabilityTolerance || !(mid > lo && mid < hi)) return mid;
    if (f < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> require_numeric_support(const Categorical& c, EstimationLossKind kind) {
  auto support = c.numeric_support();
  if (!support)
    throw ValidationError("categorical: " + std::string(to_string(kind)) + " estimate needs numeric outcome labels");
  return *support;
}

inline double categorical_median(const Categorical& c, const std::vector<double>& support) {
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return support[a] < support[b]; });
  double cumulative = 0.0;
  for (std::size_t i : order) {
    cumulative += c[i];
    if (cumulative >= 0.5) return support[i];
  }
  return support[order.back()];
}

// Integral of |sigma - s| times the piecewise-linear interpolant. Every piece
// is a product of two linear functions, so Simpson's rule is exact on it.
inline double grid_absolute_loss(const GridDensity& g, double sigma) {
  const auto xs = g.grid();
  double sum = 0.0;
  auto piece = [&](double a, double b) {
    const double mid = 0.5 * (a + b);
    const auto f = [&](double s) { return std::abs(sigma - s) * g.pdf(s); };
    sum += (b - a) / 6.0 * (f(a) + 4.0 * f(mid) + f(b));
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (sigma > xs[i] && sigma < xs[i + 1]) {
      piece(xs[i], sigma);
      piece(sigma, xs[i + 1]);
    } else {
      piece(xs[i], xs[i + 1]);
    }
  }
  return sum / g.interpolant_mass();
}

// Simpson integral of f * pdf over [lo, hi], split at `kink` when it falls inside.
template <typename F>
double closed_form_expectation(const Density& p, F&& f, const QuadratureWindow& w, std::optional<double> kink) {
  auto integrate_piece = [&](double a, double b, std::size_t n) {
    const auto xs = linspace(a, b, n);
    const auto ws = quadrature_weights(xs, IntegrationRule::simpson);
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) sum += ws[i] * f(xs[i]) * pdf(p, xs[i]);
    return sum;
  };
  const std::size_t n = w.n | 1u;
  if (kink && *kink > w.lo && *kink < w.hi) {
    const std::size_t half = (n / 2) | 1u;
    return integrate_piece(w.lo, *kink, half) + integrate_piece(*kink, w.hi, half);
  }
  return integrate_piece(w.lo, w.hi, n);
}

} // namespace detail

/// Point estimate minimizing the expected estimation loss under p.
///
/// delta-mode: argmax of the density, smallest location on ties.
/// absolute-median: where the cumulative distribution crosses 1/2.
/// squared-mean: the first moment.
/// Categorical beliefs report positions through numeric labels when present;
/// the mode falls back to the outcome index.
inline double estimate(const Density& p, const EstimationLoss& loss) {
  const auto kind = loss.kind;
  if (const auto* g = std::get_if<Gaussian1D>(&p)) return g->mean();

  if (kind == EstimationLossKind::squared_mean) {
    if (const auto* c = std::get_if<Categorical>(&p)) detail::require_numeric_support(*c, kind);
    return moments(p).mean;
  }

  if (const auto* c = std::get_if<Categorical>(&p)) {
    if (kind == EstimationLossKind::delta_mode) {
      const std::size_t i = detail::first_max_index(c->weights());
      if (auto support = c->numeric_support()) return (*support)[i];
      return static_cast<double>(i);
    }
    return detail::categorical_median(*c, detail::require_numeric_support(*c, kind));
  }

  if (const auto* m = std::get_if<Mixture1D>(&p)) {
    if (kind == EstimationLossKind::delta_mode) return detail::mixture_mode(*m);
    const auto w = default_window(p);
    return detail::bisect_median([m](double s) { return m->cdf(s); }, w.lo, w.hi);
  }

  const auto& g = std::get<GridDensity>(p);
  if (kind == EstimationLossKind::delta_mode) return g.grid()[detail::first_max_index(g.values())];
  return detail::bisect_median([&g](double s) { return g.cdf(s); }, g.lo(), g.hi());
}

/// <L(sigma, s0)>_p by quadrature; the delta loss returns -p(sigma) directly.
///
/// Gaussian and mixture beliefs integrate with Simpson's rule over `window`
/// (default: the belief's default window), split at sigma for the absolute
/// loss. Grid beliefs use their own weights, except the absolute loss which is
/// integrated exactly against the interpolant that also defines cdf().
inline double expected_estimation_loss(const Density& p, double sigma, const EstimationLoss& loss,
                                       std::optional<QuadratureWindow> window = std::nullopt) {
  if (loss.kind == EstimationLossKind::delta_mode) {
    if (const auto* c = std::get_if<Categorical>(&p)) {
      if (auto support = c->numeric_support()) {
        double mass = 0.0;
        for (std::size_t i = 0; i < c->size(); ++i) {
          if ((*support)[i] == sigma) mass += (*c)[i];
        }
        return -mass;
      }
    }
    return -pdf(p, sigma);
  }
  if (!loss.eval) throw ValidationError("estimation loss has no evaluation function");

  if (const auto* c = std::get_if<Categorical>(&p)) {
    const auto support = detail::require_numeric_support(*c, loss.kind);
    double sum = 0.0;
    for (std::size_t i = 0; i < c->size(); ++i) sum += (*c)[i] * loss.eval(sigma, support[i]);
    return sum;
  }

  if (const auto* g = std::get_if<GridDensity>(&p)) {
    if (loss.kind == EstimationLossKind::absolute_median) return detail::grid_absolute_loss(*g, sigma);
    double sum = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) sum += g->weights()[i] * g->values()[i] * loss.eval(sigma, g->grid()[i]);
    return sum;
  }

  const QuadratureWindow w = window ? *window : default_window(p);
  if (!(w.lo < w.hi) || w.n < 16) throw ValidationError("expected loss: invalid quadrature window");
  if (truncated_mass(p, w.lo, w.hi) > kMaxTruncatedMass)
    throw ValidationError("expected loss: quadrature window truncates more than 1e-8 of the belief");
  const std::optional<double> kink =
      loss.kind == EstimationLossKind::absolute_median ? std::optional<double>(sigma) : std::nullopt;
  return detail::closed_form_expectation(p, [&](double s) { return loss.eval(sigma, s); }, w, kink);
}

} // namespace beliefapprox
