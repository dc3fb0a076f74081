#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/quadrature.hpp"
#include "beliefapprox/scoring.hpp"
#include "beliefapprox/simplex_search.hpp"

namespace beliefapprox {

enum class FitDirection {
  approximation_kl,  // minimize KL(p, q) over q
  inference_kl,      // minimize KL(q, p) over q
};

inline std::string_view to_string(FitDirection d) {
  return d == FitDirection::approximation_kl ? "approximation-kl" : "inference-kl";
}

inline FitDirection fit_direction_from_string(std::string_view name) {
  if (name == "approx" || name == "approximation-kl") return FitDirection::approximation_kl;
  if (name == "infer" || name == "inference-kl") return FitDirection::inference_kl;
  throw ValidationError("direction must be approx or infer (got '" + std::string(name) + "')");
}

inline constexpr double kVarianceFloor = 1e-8;

/// The restricted set of candidate approximations.
///
/// Natural parameters are what callers see: (mean, variance) for Gaussians,
/// the probability vector for categoricals. The optimizer works on
/// unconstrained coordinates: (mean, ln variance), or softmax scores with the
/// last one pinned to zero.
class ParametricFamily {
public:
  enum class Kind { gaussian1d, categorical_simplex };

  static ParametricFamily gaussian(double variance_floor = kVarianceFloor) {
    if (!(variance_floor > 0.0)) throw ValidationError("gaussian family: variance floor must be positive");
    return ParametricFamily(Kind::gaussian1d, variance_floor, 0);
  }
  static ParametricFamily categorical(std::size_t outcomes) {
    if (outcomes < 2) throw ValidationError("categorical family: needs at least 2 outcomes");
    return ParametricFamily(Kind::categorical_simplex, 0.0, outcomes);
  }

  Kind kind() const { return kind_; }
  double variance_floor() const { return variance_floor_; }
  std::size_t outcomes() const { return outcomes_; }
  std::size_t dimension() const { return kind_ == Kind::gaussian1d ? 2 : outcomes_ - 1; }

  std::vector<double> to_natural(std::span<const double> theta) const {
    if (kind_ == Kind::gaussian1d) return {theta[0], std::max(std::exp(theta[1]), variance_floor_)};
    const auto logs = log_softmax(theta);
    std::vector<double> probs(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) probs[i] = std::exp(logs[i]);
    return probs;
  }

  std::vector<double> to_unconstrained(std::span<const double> natural) const {
    if (kind_ == Kind::gaussian1d) {
      if (natural.size() != 2) throw ValidationError("gaussian family: parameters are (mean, variance)");
      if (!std::isfinite(natural[0])) throw ValidationError("gaussian family: mean must be finite");
      if (!(natural[1] >= variance_floor_) || !std::isfinite(natural[1]))
        throw ValidationError("gaussian family: variance must be finite and at least the variance floor");
      return {natural[0], std::log(natural[1])};
    }
    if (natural.size() != outcomes_) throw ValidationError("categorical family: parameter count must equal the outcome count");
    for (double v : natural) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("categorical family: probabilities must be positive");
    }
    std::vector<double> theta(outcomes_ - 1);
    for (std::size_t i = 0; i + 1 < outcomes_; ++i) theta[i] = std::log(natural[i]) - std::log(natural.back());
    return theta;
  }

  Density make(std::span<const double> theta) const {
    const auto natural = to_natural(theta);
    if (kind_ == Kind::gaussian1d) return Gaussian1D(natural[0], natural[1]);
    return Categorical::normalized(natural);
  }

  std::vector<double> log_softmax(std::span<const double> theta) const {
    std::vector<double> z(theta.begin(), theta.end());
    z.push_back(0.0);
    const double lse = detail::log_sum_exp(z);
    for (double& v : z) v -= lse;
    return z;
  }

private:
  ParametricFamily(Kind kind, double floor, std::size_t outcomes)
      : kind_(kind), variance_floor_(floor), outcomes_(outcomes) {}

  Kind kind_;
  double variance_floor_;
  std::size_t outcomes_;
};

struct MultistartResult {
  std::vector<double> initial_point;     // natural parameters
  std::vector<double> final_parameters;  // natural parameters
  double final_value;
  std::size_t iterations;
  bool converged;
};

struct FitReport {
  Density fitted;
  double divergence_value;
  FitDirection direction;
  std::vector<double> initial_point;
  std::size_t iterations;
  bool converged;
  std::vector<MultistartResult> multistart_results;
};

struct FitOptions {
  std::optional<std::vector<double>> init;         // natural parameters; replaces the multistart policy
  std::optional<QuadratureWindow> target_window;   // discretization of closed-form targets
  SimplexSearchOptions search;
};

/// KL(p, N(mean, variance)) by quadrature on a fixed discretization of p.
/// ln q is evaluated analytically, so the objective stays finite for any
/// positive variance.
class GaussianApproximationObjective {
public:
  explicit GaussianApproximationObjective(const Density& target, std::optional<QuadratureWindow> window = std::nullopt) {
    if (std::holds_alternative<Categorical>(target))
      throw ValidationError("gaussian family cannot approximate a categorical target");
    const GridDensity g = std::holds_alternative<GridDensity>(target)
                              ? std::get<GridDensity>(target)
                              : discretize(target, window ? *window : default_window(target));
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!(g.values()[i] > kZeroDensity)) continue;
      nodes_.push_back(g.grid()[i]);
      mass_.push_back(g.weights()[i] * g.values()[i]);
      log_p_.push_back(g.log_values()[i]);
    }
  }

  double operator()(double mean, double variance) const {
    const double log_norm = 0.5 * std::log(2.0 * std::numbers::pi * variance);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double z = nodes_[i] - mean;
      sum += mass_[i] * (log_p_[i] + log_norm + 0.5 * z * z / variance);
    }
    return sum;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> mass_;
  std::vector<double> log_p_;
};

/// KL(N(mean, variance), p) by Simpson quadrature over mean +- 10 sd, so the
/// nodes follow q however narrow it gets. Returns +infinity where p vanishes
/// inside that window.
class GaussianInferenceObjective {
public:
  static constexpr std::size_t kNodes = 2049;
  static constexpr double kHalfWidthSigmas = 10.0;

  explicit GaussianInferenceObjective(Density target) : target_(std::move(target)) {
    if (std::holds_alternative<Categorical>(target_))
      throw ValidationError("gaussian family cannot approximate a categorical target");
  }

  double operator()(double mean, double variance) const {
    const Gaussian1D q(mean, variance);
    const double half = kHalfWidthSigmas * q.stddev();
    const auto xs = linspace(mean - half, mean + half, kNodes);
    const auto ws = quadrature_weights(xs, IntegrationRule::simpson);
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double log_q = q.log_pdf(xs[i]);
      const double log_p = log_pdf(target_, xs[i]);
      if (log_p == -std::numeric_limits<double>::infinity()) return std::numeric_limits<double>::infinity();
      sum += ws[i] * std::exp(log_q) * (log_q - log_p);
    }
    return sum;
  }

private:
  Density target_;
};

namespace detail {

// Inverse cdf by bisection for one-dimensional densities.
inline double quantile(const Density& p, double prob) {
  const QuadratureWindow w = default_window(p);
  double lo = w.lo;
  double hi = w.hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(p, mid) < prob) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// 4 means at evenly spaced quantiles from 10% to 90%, each with variance 1
// and the target variance.
inline std::vector<std::vector<double>> gaussian_starts(const Density& p) {
  const double target_variance = moments(p).variance;
  std::vector<std::vector<double>> starts;
  for (int k = 0; k < 4; ++k) {
    const double mean = quantile(p, 0.1 + 0.8 * k / 3.0);
    starts.push_back({mean, 1.0});
    starts.push_back({mean, std::max(target_variance, kVarianceFloor)});
  }
  return starts;
}

inline std::vector<std::vector<double>> categorical_starts(const ParametricFamily& family) {
  std::vector<std::vector<double>> starts;
  for (int k = 0; k < 8; ++k) {
    std::vector<double> theta(family.dimension(), 0.0);
    for (std::size_t j = 0; j < theta.size(); ++j) theta[j] = k == 0 ? 0.0 : std::cos(k * static_cast<double>(j + 1));
    starts.push_back(family.to_natural(theta));
  }
  return starts;
}

} // namespace detail

/// Gaussian with the target's mean and variance: the exact minimizer of
/// KL(p, q) over Gaussian q.
inline Gaussian1D moment_match_gaussian(const Density& p) {
  const Moments m = moments(p);
  if (!std::isfinite(m.mean) || !std::isfinite(m.variance) || !(m.variance > 0.0))
    throw ValidationError("moment matching: target has no positive finite variance");
  return Gaussian1D(m.mean, m.variance);
}

/// Fits q from `family` to p by minimizing KL(p, q) or KL(q, p) with the
/// downhill simplex method.
///
/// Without options.init the fit runs a fixed set of 8 starts and keeps the
/// best (first on ties); every endpoint is listed in the report. A report
/// with converged == false still carries the best point found. Throws
/// NumericalError when every start evaluates to +infinity.
inline FitReport fit(const Density& p, const ParametricFamily& family, FitDirection direction,
                     const FitOptions& options = {}) {
  std::function<double(const std::vector<double>&)> objective;
  std::vector<std::vector<double>> starts;
  SimplexSearchOptions search = options.search;

  if (family.kind() == ParametricFamily::Kind::gaussian1d) {
    if (direction == FitDirection::approximation_kl) {
      auto obj = std::make_shared<GaussianApproximationObjective>(p, options.target_window);
      objective = [obj, &family](const std::vector<double>& theta) {
        const auto nat = family.to_natural(theta);
        return (*obj)(nat[0], nat[1]);
      };
    } else {
      auto obj = std::make_shared<GaussianInferenceObjective>(p);
      objective = [obj, &family](const std::vector<double>& theta) {
        const auto nat = family.to_natural(theta);
        return (*obj)(nat[0], nat[1]);
      };
    }
    if (search.initial_steps.empty()) search.initial_steps = {0.25 * std::sqrt(moments(p).variance), 0.25};
    starts = options.init ? std::vector<std::vector<double>>{*options.init} : detail::gaussian_starts(p);
  } else {
    const auto* pc = std::get_if<Categorical>(&p);
    if (!pc) throw ValidationError("categorical family needs a categorical target");
    if (pc->size() != family.outcomes()) throw ValidationError("categorical family: outcome count differs from the target");
    std::vector<double> probs(pc->weights().begin(), pc->weights().end());
    objective = [probs, &family, direction](const std::vector<double>& theta) {
      const auto log_q = family.log_softmax(theta);
      double sum = 0.0;
      for (std::size_t i = 0; i < probs.size(); ++i) {
        if (direction == FitDirection::approximation_kl) {
          if (probs[i] > kZeroDensity) sum += probs[i] * (std::log(probs[i]) - log_q[i]);
        } else {
          if (!(probs[i] > kZeroDensity)) return std::numeric_limits<double>::infinity();
          sum += std::exp(log_q[i]) * (log_q[i] - std::log(probs[i]));
        }
      }
      return sum;
    };
    starts = options.init ? std::vector<std::vector<double>>{*options.init} : detail::categorical_starts(family);
  }

  std::vector<MultistartResult> runs;
  std::vector<double> best_theta;
  std::size_t best = 0;
  for (const auto& start : starts) {
    const auto theta0 = family.to_unconstrained(start);
    const auto r = simplex_search(objective, theta0, search);
    runs.push_back({start, family.to_natural(r.best), r.value, r.iterations, r.converged});
    if (runs.size() == 1 || r.value < runs[best].final_value) {
      best = runs.size() - 1;
      best_theta = r.best;
    }
  }
  if (!std::isfinite(runs[best].final_value))
    throw NumericalError("fit: objective is +infinity at every start (family support does not cover the target)");

  const auto& winner = runs[best];
  Density fitted = family.make(best_theta);
  if (const auto* pc = std::get_if<Categorical>(&p); pc && !pc->labels().empty()) {
    const auto& w = std::get<Categorical>(fitted).weights();
    fitted = Categorical(std::vector<double>(w.begin(), w.end()), pc->labels());
  }
  return FitReport{std::move(fitted),
                   std::max(winner.final_value, 0.0),
                   direction,
                   winner.initial_point,
                   winner.iterations,
                   winner.converged,
                   std::move(runs)};
}

struct Figure1Row {
  double s;
  double p;
  double q_approx;
  double q_infer;
};

struct Figure1Result {
  double separation;
  double component_variance;
  Mixture1D target;
  FitReport approximation;
  FitReport inference_plus;   // started at +separation / 2
  FitReport inference_minus;  // started at -separation / 2
  double kl_p_approx;         // KL(p, q_approx)
  double kl_p_infer;          // KL(p, q_infer), q_infer from the + start
  std::vector<Figure1Row> table;
};

/// Fits one Gaussian to 0.5 N(-sep, v) + 0.5 N(+sep, v) in both KL
/// directions and tabulates target and fits over a plotting grid.
inline Figure1Result figure1_demo(double separation = 3.0, double component_variance = 1.0,
                                  std::size_t plot_points = 401) {
  if (!(separation >= 0.0) || !std::isfinite(separation)) throw ValidationError("figure1: separation must be >= 0");
  if (plot_points < 2) throw ValidationError("figure1: need at least 2 plot points");
  Mixture1D target({0.5, 0.5}, {Gaussian1D(-separation, component_variance), Gaussian1D(separation, component_variance)});
  const Density p = target;
  const auto family = ParametricFamily::gaussian();

  FitReport approx = fit(p, family, FitDirection::approximation_kl);
  FitOptions plus;
  plus.init = std::vector<double>{separation / 2.0, component_variance};
  FitOptions minus;
  minus.init = std::vector<double>{-separation / 2.0, component_variance};
  FitReport infer_plus = fit(p, family, FitDirection::inference_kl, plus);
  FitReport infer_minus = fit(p, family, FitDirection::inference_kl, minus);

  const auto& qa = std::get<Gaussian1D>(approx.fitted);
  const auto& qi = std::get<Gaussian1D>(infer_plus.fitted);
  const double kl_approx = kl(p, Density(qa));
  const double kl_infer = kl(p, Density(qi));

  const double reach = separation + 5.0 * std::sqrt(component_variance);
  std::vector<Figure1Row> table;
  for (double s : linspace(-reach, reach, plot_points)) table.push_back({s, target.pdf(s), qa.pdf(s), qi.pdf(s)});

  return Figure1Result{separation, component_variance, std::move(target), std::move(approx), std::move(infer_plus),
                       std::move(infer_minus), kl_approx, kl_infer, std::move(table)};
}

} // namespace beliefapprox
