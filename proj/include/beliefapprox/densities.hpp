#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "beliefapprox/error.hpp"
#include "beliefapprox/quadrature.hpp"

namespace beliefapprox {

// Density values at or below this are treated as exact zeros.
inline constexpr double kZeroDensity = 1e-300;

inline constexpr double kNormalizationTolerance = 1e-12;

// Largest probability mass a discretization window may cut off.
inline constexpr double kMaxTruncatedMass = 1e-8;

inline constexpr double kDefaultWindowSigmas = 8.0;
inline constexpr std::size_t kDefaultGridPoints = 4096;

namespace detail {

inline double log_sum_exp(std::span<const double> xs) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : xs) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - top);
  return top + std::log(sum);
}

inline std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline double checked_sum(std::span<const double> weights, const char* what) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw ValidationError(std::string(what) + ": weights must be finite and nonnegative");
    sum += w;
  }
  return sum;
}

} // namespace detail

/// Probability mass function over a finite set of mutually exclusive outcomes.
///
/// Outcomes are addressed by index. Labels are optional; when every label
/// parses as a number the distribution also has a numeric support, which the
/// moment and estimator code uses.
class Categorical {
public:
  explicit Categorical(std::vector<double> weights, std::vector<std::string> labels = {})
      : weights_(std::move(weights)), labels_(std::move(labels)) {
    if (weights_.empty()) throw ValidationError("categorical: weights must not be empty");
    const double sum = detail::checked_sum(weights_, "categorical");
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw ValidationError("categorical: weights must sum to 1 (got " + std::to_string(sum) + ")");
    if (!labels_.empty() && labels_.size() != weights_.size())
      throw ValidationError("categorical: labels must match weights in length");
  }

  // Divides by the total, for callers holding unnormalized masses.
  static Categorical normalized(std::vector<double> raw, std::vector<std::string> labels = {}) {
    const double sum = detail::checked_sum(raw, "categorical");
    if (!(sum > 0.0)) throw ValidationError("categorical: total mass must be positive");
    for (double& w : raw) w /= sum;
    return Categorical(std::move(raw), std::move(labels));
  }

  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  std::optional<std::vector<double>> numeric_support() const {
    if (labels_.empty()) return std::nullopt;
    std::vector<double> support;
    support.reserve(labels_.size());
    for (const auto& label : labels_) {
      auto value = detail::parse_number(label);
      if (!value) return std::nullopt;
      support.push_back(*value);
    }
    return support;
  }

private:
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

class Gaussian1D {
public:
  Gaussian1D(double mean, double variance) : mean_(mean), variance_(variance) {
    if (!std::isfinite(mean)) throw ValidationError("gaussian: mean must be finite");
    if (!std::isfinite(variance) || !(variance > 0.0))
      throw ValidationError("gaussian: variance must be finite and strictly positive");
  }

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  double stddev() const { return std::sqrt(variance_); }

  double log_pdf(double s) const {
    const double z = s - mean_;
    return -0.5 * (std::log(2.0 * std::numbers::pi * variance_) + z * z / variance_);
  }
  double pdf(double s) const { return std::exp(log_pdf(s)); }
  double cdf(double s) const { return 0.5 * std::erfc(-(s - mean_) / std::sqrt(2.0 * variance_)); }
  // 1 - cdf without cancellation in the upper tail.
  double survival(double s) const { return 0.5 * std::erfc((s - mean_) / std::sqrt(2.0 * variance_)); }

  friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;

private:
  double mean_;
  double variance_;
};

class Mixture1D {
public:
  Mixture1D(std::vector<double> weights, std::vector<Gaussian1D> components)
      : weights_(std::move(weights)), components_(std::move(components)) {
    if (components_.empty()) throw ValidationError("mixture: needs at least one component");
    if (weights_.size() != components_.size())
      throw ValidationError("mixture: weights and components differ in length");
    for (double w : weights_) {
      if (!std::isfinite(w) || !(w > 0.0)) throw ValidationError("mixture: weights must be positive");
    }
    const double sum = detail::checked_sum(weights_, "mixture");
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw ValidationError("mixture: weights must sum to 1 (got " + std::to_string(sum) + ")");
  }

  std::size_t size() const { return components_.size(); }
  std::span<const double> weights() const { return weights_; }
  const std::vector<Gaussian1D>& components() const { return components_; }

  double log_pdf(double s) const {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < components_.size(); ++i)
      top = std::max(top, std::log(weights_[i]) + components_[i].log_pdf(s));
    double sum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i)
      sum += std::exp(std::log(weights_[i]) + components_[i].log_pdf(s) - top);
    return top + std::log(sum);
  }
  double pdf(double s) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) sum += weights_[i] * components_[i].pdf(s);
    return sum;
  }
  double cdf(double s) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) sum += weights_[i] * components_[i].cdf(s);
    return sum;
  }
  double survival(double s) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < components_.size(); ++i) sum += weights_[i] * components_[i].survival(s);
    return sum;
  }

  friend bool operator==(const Mixture1D&, const Mixture1D&) = default;

private:
  std::vector<double> weights_;
  std::vector<Gaussian1D> components_;
};

/// Density sampled on a strictly increasing grid.
///
/// Values are renormalized at construction so that the chosen quadrature rule
/// integrates them to one; the pre-normalization integral is kept in
/// raw_integral() for diagnostics. Log values are stored alongside so that
/// ratios far in the tails never pass through an underflowed exp().
///
/// Between nodes the density is the linear interpolant of the node values and
/// it is zero outside [lo, hi]. cdf() integrates that interpolant exactly.
class GridDensity {
public:
  GridDensity(std::vector<double> grid, std::vector<double> values,
              IntegrationRule rule = IntegrationRule::simpson)
      : grid_(std::move(grid)), rule_(rule) {
    validate_grid(values.size());
    for (double v : values) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("grid: values must be finite and nonnegative");
    }
    weights_ = quadrature_weights(grid_, rule_);
    raw_integral_ = integrate(weights_, values);
    if (!(raw_integral_ > 0.0)) throw ValidationError("grid: values integrate to zero");
    const double log_z = std::log(raw_integral_);
    values_.resize(values.size());
    log_values_.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      values_[i] = values[i] / raw_integral_;
      log_values_[i] = values[i] > 0.0 ? std::log(values[i]) - log_z : -std::numeric_limits<double>::infinity();
    }
    build_cdf();
  }

  // Builds from unnormalized log density values.
  static GridDensity from_log_values(std::vector<double> grid, std::span<const double> log_values,
                                     IntegrationRule rule = IntegrationRule::simpson) {
    if (log_values.size() != grid.size()) throw ValidationError("grid: log values must match grid in length");
    double top = -std::numeric_limits<double>::infinity();
    for (double l : log_values) {
      if (std::isnan(l) || l == std::numeric_limits<double>::infinity())
        throw ValidationError("grid: log values must be finite or -inf");
      top = std::max(top, l);
    }
    if (!std::isfinite(top)) throw ValidationError("grid: density vanishes everywhere");
    std::vector<double> scaled(log_values.size());
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = std::exp(log_values[i] - top);
    GridDensity out(std::move(grid), std::move(scaled), rule);
    // Recompute logs from the inputs so tail values stay exact.
    const double log_z = std::log(out.raw_integral_) + top;
    for (std::size_t i = 0; i < out.log_values_.size(); ++i) out.log_values_[i] = log_values[i] - log_z;
    out.raw_integral_ = std::exp(log_z);
    return out;
  }

  std::size_t size() const { return grid_.size(); }
  std::span<const double> grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> log_values() const { return log_values_; }
  std::span<const double> weights() const { return weights_; }
  IntegrationRule rule() const { return rule_; }
  double raw_integral() const { return raw_integral_; }
  double lo() const { return grid_.front(); }
  // Integral of the piecewise-linear interpolant (trapezoid rule); cdf() and
  // interpolant-based expectations divide by it.
  double interpolant_mass() const { return cumulative_.back(); }
  double hi() const { return grid_.back(); }

  double pdf(double s) const {
    if (s < lo() || s > hi()) return 0.0;
    const auto [i, t] = locate(s);
    if (t == 0.0) return values_[i];
    return (1.0 - t) * values_[i] + t * values_[i + 1];
  }

  double log_pdf(double s) const {
    if (s < lo() || s > hi()) return -std::numeric_limits<double>::infinity();
    const auto [i, t] = locate(s);
    if (t == 0.0) return log_values_[i];
    const double v = (1.0 - t) * values_[i] + t * values_[i + 1];
    return v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  }

  double cdf(double s) const {
    if (s <= lo()) return 0.0;
    if (s >= hi()) return 1.0;
    const auto [i, t] = locate(s);
    const double h = grid_[i + 1] - grid_[i];
    const double x = t * h;
    const double slope = (values_[i + 1] - values_[i]) / h;
    const double partial = values_[i] * x + 0.5 * slope * x * x;
    return (cumulative_[i] + partial) / cumulative_.back();
  }

  // Node-wise equality of the support grids, up to rounding.
  bool same_grid(const GridDensity& other) const {
    if (other.grid_.size() != grid_.size()) return false;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (std::abs(grid_[i] - other.grid_[i]) > 1e-12 * std::max(1.0, std::abs(grid_[i]))) return false;
    }
    return true;
  }

private:
  void validate_grid(std::size_t value_count) const {
    if (grid_.size() < 3) throw ValidationError("grid: needs at least 3 points");
    if (value_count != grid_.size()) throw ValidationError("grid: values must match grid in length");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!std::isfinite(grid_[i])) throw ValidationError("grid: support points must be finite");
      if (i > 0 && !(grid_[i] > grid_[i - 1])) throw ValidationError("grid: support must be strictly increasing");
    }
  }

  // Cell index and fractional position of s inside [lo, hi].
  std::pair<std::size_t, double> locate(double s) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    i = i == 0 ? 0 : i - 1;
    if (i + 1 >= grid_.size()) return {grid_.size() - 1, 0.0};
    return {i, (s - grid_[i]) / (grid_[i + 1] - grid_[i])};
  }

  void build_cdf() {
    cumulative_.assign(grid_.size(), 0.0);
    for (std::size_t i = 1; i < grid_.size(); ++i)
      cumulative_[i] = cumulative_[i - 1] + 0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
  }

  std::vector<double> grid_;
  std::vector<double> values_;
  std::vector<double> log_values_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  IntegrationRule rule_;
  double raw_integral_ = 1.0;
};

using Density = std::variant<Categorical, Gaussian1D, Mixture1D, GridDensity>;

inline bool is_closed_form(const Density& d) {
  return std::holds_alternative<Gaussian1D>(d) || std::holds_alternative<Mixture1D>(d);
}

// s -> scale * s + offset
class AffineMap {
public:
  AffineMap(double scale, double offset) : scale_(scale), offset_(offset) {
    if (!std::isfinite(scale) || scale == 0.0) throw ValidationError("affine map: scale must be finite and nonzero");
    if (!std::isfinite(offset)) throw ValidationError("affine map: offset must be finite");
  }

  double scale() const { return scale_; }
  double offset() const { return offset_; }
  double operator()(double s) const { return scale_ * s + offset_; }
  AffineMap inverse() const { return AffineMap(1.0 / scale_, -offset_ / scale_); }

private:
  double scale_;
  double offset_;
};

/// The measure m against which loss arguments q/m are formed.
///
/// Counting-uniform is m = 1 everywhere. Explicit values are per outcome for
/// categorical spaces and per node for grids. Zeros are allowed in the values;
/// operations reject them only where they would divide a contributing term.
class ReferenceMeasure {
public:
  static ReferenceMeasure counting() { return ReferenceMeasure(); }

  static ReferenceMeasure from_values(std::vector<double> values) {
    if (values.empty()) throw ValidationError("reference measure: values must not be empty");
    for (double v : values) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("reference measure: values must be finite and nonnegative");
    }
    ReferenceMeasure m;
    m.values_ = std::move(values);
    return m;
  }

  // m = p, as forced by demanding zero expected loss for the actual belief.
  static ReferenceMeasure from_density(const Density& p) {
    if (const auto* c = std::get_if<Categorical>(&p)) return from_values({c->weights().begin(), c->weights().end()});
    if (const auto* g = std::get_if<GridDensity>(&p)) return from_values({g->values().begin(), g->values().end()});
    throw ValidationError("reference measure: only categorical or grid densities can serve as m; discretize first");
  }

  bool is_counting() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double at(std::size_t i) const { return values_.empty() ? 1.0 : values_[i]; }

private:
  ReferenceMeasure() = default;
  std::vector<double> values_;
};

struct Moments {
  double mean;
  double variance;
};

struct QuadratureWindow {
  double lo;
  double hi;
  std::size_t n = kDefaultGridPoints;
};

// ---------------------------------------------------------------------------
// Evaluation

inline double pdf(const Categorical& c, std::size_t index) {
  if (index >= c.size())
    throw ValidationError("categorical: outcome index " + std::to_string(index) + " out of range");
  return c[index];
}

inline double pdf(const Density& d, double s) {
  return std::visit(
      [s](const auto& dist) -> double {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          if (s < 0.0 || s != std::floor(s)) throw ValidationError("categorical: outcome index must be a nonnegative integer");
          return pdf(dist, static_cast<std::size_t>(s));
        } else {
          return dist.pdf(s);
        }
      },
      d);
}

inline double log_pdf(const Density& d, double s) {
  return std::visit(
      [s](const auto& dist) -> double {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          if (s < 0.0 || s != std::floor(s)) throw ValidationError("categorical: outcome index must be a nonnegative integer");
          const double w = pdf(dist, static_cast<std::size_t>(s));
          return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity();
        } else {
          return dist.log_pdf(s);
        }
      },
      d);
}

// Cumulative distribution for one-dimensional densities.
inline double cdf(const Density& d, double s) {
  if (std::holds_alternative<Categorical>(d)) throw ValidationError("cdf: not defined for categorical outcomes");
  return std::visit(
      [s](const auto& dist) -> double {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          return 0.0;
        } else {
          return dist.cdf(s);
        }
      },
      d);
}

inline Moments moments(const Density& d) {
  return std::visit(
      [](const auto& dist) -> Moments {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Gaussian1D>) {
          return {dist.mean(), dist.variance()};
        } else if constexpr (std::is_same_v<T, Mixture1D>) {
          double mean = 0.0;
          for (std::size_t i = 0; i < dist.size(); ++i) mean += dist.weights()[i] * dist.components()[i].mean();
          // Centered form of sum w (v + mu^2) - mean^2.
          double variance = 0.0;
          for (std::size_t i = 0; i < dist.size(); ++i) {
            const auto& c = dist.components()[i];
            const double dm = c.mean() - mean;
            variance += dist.weights()[i] * (c.variance() + dm * dm);
          }
          return {mean, variance};
        } else if constexpr (std::is_same_v<T, GridDensity>) {
          const auto s = dist.grid();
          const auto w = dist.weights();
          const auto p = dist.values();
          double mean = 0.0;
          for (std::size_t i = 0; i < s.size(); ++i) mean += w[i] * p[i] * s[i];
          double variance = 0.0;
          for (std::size_t i = 0; i < s.size(); ++i) variance += w[i] * p[i] * (s[i] - mean) * (s[i] - mean);
          return {mean, std::max(variance, 0.0)};
        } else {
          auto support = dist.numeric_support();
          if (!support) throw ValidationError("categorical: moments need numeric outcome labels");
          double mean = 0.0;
          for (std::size_t i = 0; i < dist.size(); ++i) mean += dist[i] * (*support)[i];
          double variance = 0.0;
          for (std::size_t i = 0; i < dist.size(); ++i) variance += dist[i] * ((*support)[i] - mean) * ((*support)[i] - mean);
          return {mean, variance};
        }
      },
      d);
}

// ---------------------------------------------------------------------------
// Transformations

namespace detail {

inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

} // namespace detail

/// Distribution of scale * s + offset when s ~ d.
///
/// Mixture components keep their order for positive scales and are reversed
/// for negative ones, so a mixture sorted by mean stays sorted. Categorical
/// probabilities are untouched; numeric labels are mapped.
inline Density pushforward_affine(const Density& d, const AffineMap& u) {
  const double a = u.scale();
  return std::visit(
      [&](const auto& dist) -> Density {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Gaussian1D>) {
          return Gaussian1D(u(dist.mean()), a * a * dist.variance());
        } else if constexpr (std::is_same_v<T, Mixture1D>) {
          std::vector<double> weights(dist.weights().begin(), dist.weights().end());
          std::vector<Gaussian1D> comps;
          comps.reserve(dist.size());
          for (const auto& c : dist.components()) comps.emplace_back(u(c.mean()), a * a * c.variance());
          if (a < 0.0) {
            std::reverse(weights.begin(), weights.end());
            std::reverse(comps.begin(), comps.end());
          }
          return Mixture1D(std::move(weights), std::move(comps));
        } else if constexpr (std::is_same_v<T, GridDensity>) {
          std::vector<double> grid(dist.size());
          std::vector<double> logs(dist.size());
          const double log_jacobian = std::log(std::abs(a));
          for (std::size_t i = 0; i < dist.size(); ++i) {
            grid[i] = u(dist.grid()[i]);
            logs[i] = dist.log_values()[i] - log_jacobian;
          }
          if (a < 0.0) {
            std::reverse(grid.begin(), grid.end());
            std::reverse(logs.begin(), logs.end());
          }
          return GridDensity::from_log_values(std::move(grid), logs, dist.rule());
        } else {
          std::vector<std::string> labels = dist.labels();
          if (auto support = dist.numeric_support()) {
            for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = detail::format_number(u((*support)[i]));
          }
          return Categorical(std::vector<double>(dist.weights().begin(), dist.weights().end()), std::move(labels));
        }
      },
      d);
}

// [min mu_i - 8 sigma_i, max mu_i + 8 sigma_i] over the components of a closed-form density.
inline QuadratureWindow default_window(const Density& d, std::size_t n = kDefaultGridPoints) {
  if (const auto* g = std::get_if<Gaussian1D>(&d))
    return {g->mean() - kDefaultWindowSigmas * g->stddev(), g->mean() + kDefaultWindowSigmas * g->stddev(), n};
  if (const auto* m = std::get_if<Mixture1D>(&d)) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : m->components()) {
      lo = std::min(lo, c.mean() - kDefaultWindowSigmas * c.stddev());
      hi = std::max(hi, c.mean() + kDefaultWindowSigmas * c.stddev());
    }
    return {lo, hi, n};
  }
  if (const auto* g = std::get_if<GridDensity>(&d)) return {g->lo(), g->hi(), g->size()};
  throw ValidationError("default window: categorical densities have no continuous support");
}

inline QuadratureWindow window_union(const QuadratureWindow& a, const QuadratureWindow& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi), std::max(a.n, b.n)};
}

// Probability mass of a closed-form density outside [lo, hi].
inline double truncated_mass(const Density& d, double lo, double hi) {
  if (const auto* g = std::get_if<Gaussian1D>(&d)) return g->cdf(lo) + g->survival(hi);
  if (const auto* m = std::get_if<Mixture1D>(&d)) return m->cdf(lo) + m->survival(hi);
  throw ValidationError("truncated mass: needs a gaussian or mixture density");
}

/// Samples a closed-form density at the given nodes and renormalizes.
/// Throws if more than kMaxTruncatedMass lies outside the nodes' span.
inline GridDensity sample_on_grid(const Density& d, std::vector<double> grid,
                                  IntegrationRule rule = IntegrationRule::simpson) {
  if (!is_closed_form(d)) throw ValidationError("discretize: needs a gaussian or mixture density");
  if (grid.size() < 3) throw ValidationError("discretize: needs at least 3 nodes");
  const double lost = truncated_mass(d, grid.front(), grid.back());
  if (lost > kMaxTruncatedMass) {
    throw ValidationError("discretize: window [" + detail::format_number(grid.front()) + ", " +
                          detail::format_number(grid.back()) + "] truncates mass " + detail::format_number(lost) +
                          " > 1e-8");
  }
  std::vector<double> logs(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) logs[i] = log_pdf(d, grid[i]);
  return GridDensity::from_log_values(std::move(grid), logs, rule);
}

inline GridDensity discretize(const Density& d, double lo, double hi, std::size_t n) {
  if (!(lo < hi)) throw ValidationError("discretize: need lo < hi");
  if (n < 16) throw ValidationError("discretize: need at least 16 points");
  return sample_on_grid(d, linspace(lo, hi, n));
}

inline GridDensity discretize(const Density& d, const QuadratureWindow& window) {
  return discretize(d, window.lo, window.hi, window.n);
}

namespace detail {

inline void check_split(std::size_t size, std::size_t index, double alpha) {
  if (index >= size) throw ValidationError("split: outcome index " + std::to_string(index) + " out of range");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("split: alpha must lie in (0, 1)");
}

inline std::vector<double> split_values(std::span<const double> values, std::size_t index, double alpha) {
  std::vector<double> out;
  out.reserve(values.size() + 1);
  out.insert(out.end(), values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index));
  out.push_back(alpha * values[index]);
  out.push_back((1.0 - alpha) * values[index]);
  out.insert(out.end(), values.begin() + static_cast<std::ptrdiff_t>(index) + 1, values.end());
  return out;
}

} // namespace detail

/// Refines outcome `index` into two outcomes carrying alpha and 1 - alpha of
/// its weight. Other weights are copied unchanged.
inline Categorical split_event(const Categorical& c, std::size_t index, double alpha) {
  detail::check_split(c.size(), index, alpha);
  std::vector<std::string> labels;
  if (!c.labels().empty()) {
    labels = c.labels();
    const std::string base = labels[index];
    labels[index] = base + "/a";
    labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(index) + 1, base + "/b");
  }
  auto weights = detail::split_values(c.weights(), index, alpha);
  // Constructed directly: the split pieces sum to the original weight up to
  // one rounding, well inside the normalization tolerance.
  return Categorical(std::move(weights), std::move(labels));
}

// Splits a measure over `outcomes` outcomes the same way; a counting measure
// becomes explicit.
inline ReferenceMeasure split_event(const ReferenceMeasure& m, std::size_t outcomes, std::size_t index, double alpha) {
  if (!m.is_counting() && m.size() != outcomes)
    throw ValidationError("split: reference measure size does not match the outcome count");
  std::vector<double> values = m.is_counting() ? std::vector<double>(outcomes, 1.0)
                                               : std::vector<double>(m.values().begin(), m.values().end());
  detail::check_split(values.size(), index, alpha);
  return ReferenceMeasure::from_values(detail::split_values(values, index, alpha));
}

} // namespace beliefapprox
