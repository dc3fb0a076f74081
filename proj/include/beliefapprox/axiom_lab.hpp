#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/scoring.hpp"

// Numerical checks of the argument that a local, proper loss must be an
// affine function of ln(q/m), and hence rank approximations by KL(p, q).

namespace beliefapprox {

struct PropernessReport {
  Categorical tested_p;
  Categorical argmin_q;
  double distance_to_p;    // Euclidean
  double grid_resolution;  // Euclidean length of one lattice step, sqrt(2) / grid_n
  bool is_proper_at_resolution;
  double min_expected_loss;
  // Spread of x L'(x) at x = p/m across outcomes; local losses only.
  std::optional<double> lagrange_residual;
};

struct LocalityWitness {
  std::vector<double> q;
  std::size_t observed;
  std::vector<double> perturbed_q;
  double loss_before;
  double loss_after;
};

struct LocalityReport {
  bool is_local;
  std::size_t trials;
  std::optional<LocalityWitness> witness;
};

struct LossShapeReport {
  std::vector<double> sample_points;
  std::vector<double> x_lprime;
  double max_spread;
  double median_x_lprime;
  double fitted_c;
  double fitted_d;
  double residual;  // RMS deviation from -C ln x + D
  bool c_positive;
  bool in_log_family;
};

enum class LossArgument {
  density_ratio,  // loss(q / m)
  raw_density,    // loss(q), ignoring m
};

struct SplittingReport {
  bool invariant;
  double before;
  double after;
  double discrepancy;
};

struct Criterion3Report {
  bool holds;
  double self_loss;           // expected log loss of p against m = p
  double cross_entropy_m_eq_p;
  double kl_pq;
  std::optional<double> kl_closed_form;  // both arguments Gaussian
};

inline constexpr double kLocalityTolerance = 1e-10;
inline constexpr double kSplittingTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-12;
inline constexpr double kDerivativeRelativeStep = 1e-6;
inline constexpr std::size_t kMaxExhaustiveOutcomes = 4;

// Central difference with step 1e-6 * x.
inline double numerical_derivative(const LocalLoss& loss, double x) {
  const double h = kDerivativeRelativeStep * x;
  return (loss(x + h) - loss(x - h)) / (2.0 * h);
}

/// Calls f(q) for every point of the simplex lattice {k / n : sum k = n} in
/// `outcomes` dimensions, boundary included.
template <typename F>
void for_each_simplex_point(std::size_t outcomes, std::size_t n, F&& f) {
  std::vector<std::size_t> counts(outcomes, 0);
  std::vector<double> q(outcomes, 0.0);
  const double inv = 1.0 / static_cast<double>(n);
  auto recurse = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == outcomes) {
      counts[pos] = remaining;
      for (std::size_t i = 0; i < outcomes; ++i) q[i] = static_cast<double>(counts[i]) * inv;
      f(std::span<const double>(q));
      return;
    }
    for (std::size_t k = 0; k <= remaining; ++k) {
      counts[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  recurse(recurse, 0, n);
}

namespace detail {

inline void check_properness_inputs(const Categorical& p, const ReferenceMeasure& m, std::size_t grid_n) {
  if (p.size() < 2 || p.size() > kMaxExhaustiveOutcomes)
    throw ValidationError("properness: exhaustive search supports 2 to 4 outcomes");
  if (grid_n < 11) throw ValidationError("properness: grid_n must be at least 11");
  for (double w : p.weights()) {
    if (!(w > 0.0)) throw ValidationError("properness: p must be strictly positive");
  }
  check_measure_size(m, p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(m.at(i) > 0.0)) throw ValidationError("properness: reference measure must be strictly positive");
  }
}

template <typename ExpectedLoss>
PropernessReport grid_argmin(const Categorical& p, std::size_t grid_n, ExpectedLoss&& expected) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_q;
  for_each_simplex_point(p.size(), grid_n, [&](std::span<const double> q) {
    const double v = expected(q);
    if (std::isnan(v)) throw ValidationError("properness: loss is undefined at a grid point");
    if (best_q.empty() || v < best) {
      best = v;
      best_q.assign(q.begin(), q.end());
    }
  });
  double dist2 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) dist2 += (best_q[i] - p[i]) * (best_q[i] - p[i]);
  const double distance = std::sqrt(dist2);
  const double resolution = std::numbers::sqrt2 / static_cast<double>(grid_n);
  return PropernessReport{p, Categorical::normalized(best_q), distance, resolution, distance <= resolution, best,
                          std::nullopt};
}

} // namespace detail

/// Exhaustive search for the report q minimizing the expected score under p,
/// over a simplex lattice of resolution 1 / grid_n. The score sees q / m.
inline PropernessReport check_properness(const GeneralScore& score, const Categorical& p, const ReferenceMeasure& m,
                                         std::size_t grid_n) {
  detail::check_properness_inputs(p, m, grid_n);
  std::vector<double> ratios(p.size());
  return detail::grid_argmin(p, grid_n, [&](std::span<const double> q) {
    for (std::size_t i = 0; i < q.size(); ++i) ratios[i] = q[i] / m.at(i);
    double sum = 0.0;
    for (std::size_t s0 = 0; s0 < q.size(); ++s0) sum += p[s0] * score(ratios, s0);
    return sum;
  });
}

/// As above for a local loss, plus the stationarity residual at q = p:
/// properness forces x L'(x) = -lambda at every x = p(s) / m(s).
inline PropernessReport check_properness(const LocalLoss& loss, const Categorical& p, const ReferenceMeasure& m,
                                         std::size_t grid_n) {
  detail::check_properness_inputs(p, m, grid_n);
  auto report = detail::grid_argmin(p, grid_n, [&](std::span<const double> q) {
    double sum = 0.0;
    for (std::size_t s = 0; s < q.size(); ++s) sum += p[s] * loss(q[s] / m.at(s));
    return sum;
  });

  std::vector<double> stationarity(p.size());
  for (std::size_t s = 0; s < p.size(); ++s) {
    const double x = p[s] / m.at(s);
    stationarity[s] = x * numerical_derivative(loss, x);
  }
  const double mean = std::accumulate(stationarity.begin(), stationarity.end(), 0.0) / static_cast<double>(p.size());
  double residual = 0.0;
  for (double g : stationarity) residual = std::max(residual, std::abs(g - mean));
  report.lagrange_residual = residual;
  return report;
}

/// Probes whether a score depends on anything besides the observed entry:
/// rescales q at every unobserved outcome (no renormalization) and reports
/// the first change larger than 1e-10.
inline LocalityReport check_locality(const GeneralScore& score, std::size_t outcome_count, std::size_t trials = 100,
                                     std::uint64_t seed = 0x5eed1234) {
  if (outcome_count < 3) throw ValidationError("locality: needs at least 3 outcomes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> entry(0.05, 1.0);
  std::uniform_real_distribution<double> factor(0.5, 2.0);
  std::uniform_int_distribution<std::size_t> pick(0, outcome_count - 1);

  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> q(outcome_count);
    double total = 0.0;
    for (double& v : q) total += (v = entry(rng));
    for (double& v : q) v /= total;
    const std::size_t s0 = pick(rng);
    std::vector<double> perturbed = q;
    for (std::size_t s = 0; s < outcome_count; ++s) {
      if (s != s0) perturbed[s] *= factor(rng);
    }
    const double before = score(q, s0);
    const double after = score(perturbed, s0);
    if (!(std::abs(after - before) <= kLocalityTolerance)) {
      return LocalityReport{false, t + 1, LocalityWitness{std::move(q), s0, std::move(perturbed), before, after}};
    }
  }
  return LocalityReport{true, trials, std::nullopt};
}

/// Samples x L'(x) on a log-uniform grid and fits L(x) = -C ln x + D by
/// least squares. The log family is confirmed when x L'(x) varies by less
/// than 1e-4 of its median magnitude and the fit residual is below 1e-6.
inline LossShapeReport check_loss_shape(const LocalLoss& loss, double x_lo, double x_hi, std::size_t n) {
  if (!(x_lo > 0.0 && x_lo < x_hi)) throw ValidationError("loss shape: need 0 < x_lo < x_hi");
  if (n < 16) throw ValidationError("loss shape: need at least 16 sample points");

  LossShapeReport r;
  const double a = std::log(x_lo);
  const double b = std::log(x_hi);
  std::vector<double> log_x(n);
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    log_x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double x = std::exp(log_x[i]);
    const double d = numerical_derivative(loss, x);
    if (!std::isfinite(d)) throw NumericalError("loss shape: non-finite derivative estimate at x = " + detail::format_number(x));
    r.sample_points.push_back(x);
    r.x_lprime.push_back(x * d);
    values[i] = loss(x);
  }

  const auto [lo_it, hi_it] = std::minmax_element(r.x_lprime.begin(), r.x_lprime.end());
  r.max_spread = *hi_it - *lo_it;
  std::vector<double> sorted = r.x_lprime;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  r.median_x_lprime = sorted[n / 2];

  // Ordinary least squares of L on ln x.
  const double mean_t = std::accumulate(log_x.begin(), log_x.end(), 0.0) / static_cast<double>(n);
  const double mean_v = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (log_x[i] - mean_t) * (values[i] - mean_v);
    sxx += (log_x[i] - mean_t) * (log_x[i] - mean_t);
  }
  const double slope = sxy / sxx;
  r.fitted_c = -slope;
  r.fitted_d = mean_v - slope * mean_t;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = values[i] - (slope * log_x[i] + r.fitted_d);
    ss += e * e;
  }
  r.residual = std::sqrt(ss / static_cast<double>(n));
  if (!std::isfinite(r.fitted_c) || !std::isfinite(r.fitted_d))
    throw NumericalError("loss shape: least-squares fit is not finite");
  r.c_positive = r.fitted_c > 0.0;
  r.in_log_family = r.max_spread < 1e-4 * std::abs(r.median_x_lprime) && r.residual < 1e-6;
  return r;
}

/// Splits q and m at `index` with proportion alpha and p with proportion
/// beta, and compares the expected loss before and after.
inline SplittingReport check_splitting_invariance(const Categorical& p, const Categorical& q, const ReferenceMeasure& m,
                                                  const LocalLoss& loss, std::size_t index, double alpha, double beta,
                                                  LossArgument argument = LossArgument::density_ratio) {
  const Categorical p_split = split_event(p, index, beta);
  const Categorical q_split = split_event(q, index, alpha);
  double before = 0.0;
  double after = 0.0;
  if (argument == LossArgument::density_ratio) {
    const ReferenceMeasure m_split = split_event(m, q.size(), index, alpha);
    before = expected_local_loss(p, q, m, loss);
    after = expected_local_loss(p_split, q_split, m_split, loss);
  } else {
    before = expected_local_loss(p, q, ReferenceMeasure::counting(), loss);
    after = expected_local_loss(p_split, q_split, ReferenceMeasure::counting(), loss);
  }
  const double gap = std::abs(after - before);
  return SplittingReport{gap <= kSplittingTolerance, before, after, gap};
}

namespace detail {

// Both arguments as categoricals, or as grids on the same nodes.
inline std::pair<Density, Density> common_support(const Density& p, const Density& q,
                                                  std::optional<QuadratureWindow> window) {
  if (std::holds_alternative<Categorical>(p) || std::holds_alternative<Categorical>(q)) {
    align(p, q);  // validates matching outcome spaces
    return {p, q};
  }
  const auto* pg = std::get_if<GridDensity>(&p);
  const auto* qg = std::get_if<GridDensity>(&q);
  if (pg || qg) {
    if (pg && qg) {
      if (!pg->same_grid(*qg)) throw ValidationError("mismatched grids: grid arguments must share their nodes");
      return {p, q};
    }
    const GridDensity& ref = pg ? *pg : *qg;
    const std::vector<double> nodes(ref.grid().begin(), ref.grid().end());
    return {pg ? p : Density(sample_on_grid(p, nodes, ref.rule())), qg ? q : Density(sample_on_grid(q, nodes, ref.rule()))};
  }
  const QuadratureWindow w = window ? *window : window_union(default_window(p), default_window(q));
  return {Density(discretize(p, w)), Density(discretize(q, w))};
}

} // namespace detail

/// With m = p the log loss of the actual belief vanishes and the expected
/// loss of q becomes KL(p, q). Checks both to 1e-12.
inline Criterion3Report verify_criterion3(const Density& p, const Density& q,
                                          std::optional<QuadratureWindow> window = std::nullopt) {
  const auto [ps, qs] = detail::common_support(p, q, window);
  const ReferenceMeasure m = ReferenceMeasure::from_density(ps);
  Criterion3Report r;
  r.self_loss = expected_local_loss(ps, ps, m, losses::log_loss());
  r.cross_entropy_m_eq_p = cross_entropy_m(ps, qs, m);
  r.kl_pq = kl(ps, qs);
  const auto* pg = std::get_if<Gaussian1D>(&p);
  const auto* qg = std::get_if<Gaussian1D>(&q);
  if (pg && qg) r.kl_closed_form = kl(*pg, *qg);
  const bool same = std::isinf(r.kl_pq) ? r.cross_entropy_m_eq_p == r.kl_pq
                                        : std::abs(r.cross_entropy_m_eq_p - r.kl_pq) <= kIdentityTolerance;
  r.holds = std::abs(r.self_loss) <= kIdentityTolerance && same;
  return r;
}

// ---------------------------------------------------------------------------
// The loss zoo used to test the uniqueness claim.

struct ZooMember {
  LocalLoss loss;
  std::optional<double> known_c;  // set for members of the -C ln x + D family
  std::optional<double> known_d;
};

inline std::vector<ZooMember> loss_zoo() {
  return {
      {losses::log_loss(), 1.0, 0.0},
      {losses::scaled_log(2.0, 5.0), 2.0, 5.0},
      {losses::linear(), std::nullopt, std::nullopt},
      {losses::square(), std::nullopt, std::nullopt},
      {losses::negative_sqrt(), std::nullopt, std::nullopt},
      {losses::reciprocal(), std::nullopt, std::nullopt},
  };
}

namespace detail {

// Random probability vector with every component at least `floor`.
inline Categorical random_categorical(std::mt19937_64& rng, std::size_t outcomes, double floor = 0.02) {
  std::exponential_distribution<double> gamma1(1.0);
  for (;;) {
    std::vector<double> w(outcomes);
    for (double& v : w) v = gamma1(rng);
    const auto c = Categorical::normalized(w);
    if (*std::min_element(c.weights().begin(), c.weights().end()) >= floor) return c;
  }
}

inline ReferenceMeasure random_measure(std::mt19937_64& rng, std::size_t outcomes) {
  std::uniform_real_distribution<double> log_value(std::log(0.2), std::log(5.0));
  std::vector<double> m(outcomes);
  for (double& v : m) v = std::exp(log_value(rng));
  return ReferenceMeasure::from_values(std::move(m));
}

} // namespace detail

} // namespace beliefapprox
