#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"

namespace beliefapprox {

/// Loss of a reported density ratio x = q(s0) / m(s0) once s0 is observed.
/// eval must be side-effect free; it may be called concurrently.
struct LocalLoss {
  std::string name;
  std::function<double(double)> eval;

  double operator()(double x) const { return eval(x); }
};

/// Loss of a full report once outcome s0 is observed. The report is passed as
/// the vector of ratios q(s) / m(s) over all outcomes, not necessarily
/// normalized. Same purity contract as LocalLoss.
struct GeneralScore {
  std::string name;
  std::function<double(std::span<const double>, std::size_t)> eval;

  double operator()(std::span<const double> ratios, std::size_t observed) const { return eval(ratios, observed); }
};

// A local loss viewed as a score that reads only the observed entry.
inline GeneralScore lift(LocalLoss loss) {
  std::string name = loss.name;
  return {std::move(name), [f = std::move(loss.eval)](std::span<const double> r, std::size_t s0) { return f(r[s0]); }};
}

namespace losses {

inline LocalLoss log_loss() {
  return {"-ln x", [](double x) { return -std::log(x); }};
}

// -C ln x + D
inline LocalLoss scaled_log(double c, double d) {
  return {"-" + detail::format_number(c) + " ln x + " + detail::format_number(d),
          [c, d](double x) { return -c * std::log(x) + d; }};
}

inline LocalLoss linear() {
  return {"x", [](double x) { return x; }};
}

inline LocalLoss square() {
  return {"x^2", [](double x) { return x * x; }};
}

inline LocalLoss negative_sqrt() {
  return {"-sqrt(x)", [](double x) { return -std::sqrt(x); }};
}

inline LocalLoss reciprocal() {
  return {"1/x", [](double x) { return 1.0 / x; }};
}

inline GeneralScore log_score() {
  return lift(log_loss());
}

// -2 q(s0) + sum_s q(s)^2
inline GeneralScore brier_score() {
  return {"brier", [](std::span<const double> q, std::size_t s0) {
            double sum_sq = 0.0;
            for (double v : q) sum_sq += v * v;
            return -2.0 * q[s0] + sum_sq;
          }};
}

// -q(s0)
inline GeneralScore linear_score() {
  return {"linear", [](std::span<const double> q, std::size_t s0) { return -q[s0]; }};
}

} // namespace losses

namespace detail {

// p and q evaluated on one common support with quadrature (or counting) weights.
struct AlignedPair {
  std::vector<double> weights;
  std::vector<double> p;
  std::vector<double> log_p;
  std::vector<double> q;
  std::vector<double> log_q;

  std::size_t size() const { return weights.size(); }
};

inline void append_categorical(const Categorical& c, std::vector<double>& values, std::vector<double>& logs) {
  values.assign(c.weights().begin(), c.weights().end());
  logs.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    logs[i] = values[i] > 0.0 ? std::log(values[i]) : -std::numeric_limits<double>::infinity();
}

inline void append_grid(const GridDensity& g, std::vector<double>& values, std::vector<double>& logs) {
  values.assign(g.values().begin(), g.values().end());
  logs.assign(g.log_values().begin(), g.log_values().end());
}

/// Puts p and q on one support.
///
/// Categorical pairs must have the same outcome count. If either argument is
/// a grid, its nodes are the support (two grids must coincide) and a
/// closed-form partner is sampled on them. Two closed-form arguments are
/// discretized on `window`, defaulting to the union of their default windows.
inline AlignedPair align(const Density& p, const Density& q, std::optional<QuadratureWindow> window = std::nullopt) {
  AlignedPair out;
  const auto* pc = std::get_if<Categorical>(&p);
  const auto* qc = std::get_if<Categorical>(&q);
  if (pc || qc) {
    if (!(pc && qc)) throw ValidationError("mismatched outcome spaces: categorical versus continuous");
    if (pc->size() != qc->size())
      throw ValidationError("mismatched outcome spaces: " + std::to_string(pc->size()) + " versus " +
                            std::to_string(qc->size()) + " outcomes");
    out.weights.assign(pc->size(), 1.0);
    append_categorical(*pc, out.p, out.log_p);
    append_categorical(*qc, out.q, out.log_q);
    return out;
  }

  const auto* pg = std::get_if<GridDensity>(&p);
  const auto* qg = std::get_if<GridDensity>(&q);
  if (pg || qg) {
    if (pg && qg && !pg->same_grid(*qg)) throw ValidationError("mismatched grids: grid arguments must share their nodes");
    const GridDensity& ref = pg ? *pg : *qg;
    const std::vector<double> nodes(ref.grid().begin(), ref.grid().end());
    const GridDensity p_grid = pg ? *pg : sample_on_grid(p, nodes, ref.rule());
    const GridDensity q_grid = qg ? *qg : sample_on_grid(q, nodes, ref.rule());
    out.weights.assign(ref.weights().begin(), ref.weights().end());
    append_grid(p_grid, out.p, out.log_p);
    append_grid(q_grid, out.q, out.log_q);
    return out;
  }

  const QuadratureWindow w = window ? *window : window_union(default_window(p), default_window(q));
  const GridDensity p_grid = discretize(p, w);
  const GridDensity q_grid = discretize(q, w);
  out.weights.assign(p_grid.weights().begin(), p_grid.weights().end());
  append_grid(p_grid, out.p, out.log_p);
  append_grid(q_grid, out.q, out.log_q);
  return out;
}

inline void check_measure_size(const ReferenceMeasure& m, std::size_t n) {
  if (!m.is_counting() && m.size() != n)
    throw ValidationError("reference measure has " + std::to_string(m.size()) + " values but the support has " +
                          std::to_string(n) + " points");
}

inline double kl_aligned(const AlignedPair& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.p[i] > kZeroDensity)) continue;
    if (!(a.q[i] > kZeroDensity)) return std::numeric_limits<double>::infinity();
    sum += a.weights[i] * a.p[i] * (a.log_p[i] - a.log_q[i]);
  }
  return std::max(sum, 0.0);
}

} // namespace detail

// ln(sq/sp) + (sp^2 + (mp - mq)^2) / (2 sq^2) - 1/2
inline double kl(const Gaussian1D& p, const Gaussian1D& q) {
  const double dm = p.mean() - q.mean();
  const double value =
      0.5 * std::log(q.variance() / p.variance()) + (p.variance() + dm * dm) / (2.0 * q.variance()) - 0.5;
  return std::max(value, 0.0);
}

/// Approximation KL(p, q) = sum/integral of p ln(p / q), in nats.
///
/// Returns +infinity when q vanishes (<= 1e-300) where p does not. Two
/// Gaussians use the closed form; every other pair goes through align().
inline double kl(const Density& p, const Density& q, std::optional<QuadratureWindow> window = std::nullopt) {
  if (!window) {
    const auto* pg = std::get_if<Gaussian1D>(&p);
    const auto* qg = std::get_if<Gaussian1D>(&q);
    if (pg && qg) return kl(*pg, *qg);
  }
  return detail::kl_aligned(detail::align(p, q, window));
}

/// -sum/integral of p ln(q / m). With the counting measure this is the plain
/// cross entropy; with m = p it is KL(p, q).
inline double cross_entropy_m(const Density& p, const Density& q, const ReferenceMeasure& m,
                              std::optional<QuadratureWindow> window = std::nullopt) {
  const auto a = detail::align(p, q, window);
  detail::check_measure_size(m, a.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.p[i] > kZeroDensity)) continue;
    if (!(a.q[i] > kZeroDensity)) return std::numeric_limits<double>::infinity();
    const double mi = m.at(i);
    if (!(mi > 0.0)) throw ValidationError("reference measure is zero where q is positive (index " + std::to_string(i) + ")");
    sum -= a.weights[i] * a.p[i] * (a.log_q[i] - std::log(mi));
  }
  return sum;
}

inline double cross_entropy_m(const Density& p, const Density& q) {
  return cross_entropy_m(p, q, ReferenceMeasure::counting());
}

/// Expected loss sum/integral of loss(q / m) p under the belief p.
inline double expected_local_loss(const Density& p, const Density& q, const ReferenceMeasure& m, const LocalLoss& loss,
                                  std::optional<QuadratureWindow> window = std::nullopt) {
  const auto a = detail::align(p, q, window);
  detail::check_measure_size(m, a.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a.p[i] > kZeroDensity)) continue;
    const double mi = m.at(i);
    if (!(mi > 0.0)) throw ValidationError("reference measure is zero where p is positive (index " + std::to_string(i) + ")");
    const double ratio = a.q[i] > 0.0 ? a.q[i] / mi : std::exp(a.log_q[i] - std::log(mi));
    if (!(ratio > 0.0)) throw ValidationError("expected loss: ratio q/m is not positive at index " + std::to_string(i));
    sum += a.weights[i] * a.p[i] * loss(ratio);
  }
  return sum;
}

/// Expected extra code length, in nats, from coding symbols drawn from p with
/// a code built for q: H(p, q) - H(p).
inline double redundancy(const Categorical& p, const Categorical& q) {
  const double cross = cross_entropy_m(p, q);
  if (std::isinf(cross)) return cross;
  return std::max(cross - cross_entropy_m(p, p), 0.0);
}

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

// Joint probability table joint(d, s): rows are data values, columns latent states.
class DiscreteJoint {
public:
  DiscreteJoint(std::size_t rows, std::size_t cols, std::vector<double> table)
      : rows_(rows), cols_(cols), table_(std::move(table)) {
    if (rows_ == 0 || cols_ == 0) throw ValidationError("joint: table must be nonempty");
    if (table_.size() != rows_ * cols_) throw ValidationError("joint: table size does not match rows x cols");
    const double sum = detail::checked_sum(table_, "joint");
    if (std::abs(sum - 1.0) > kNormalizationTolerance) throw ValidationError("joint: entries must sum to 1");
  }

  DiscreteJoint(const std::vector<std::vector<double>>& rows)
      : DiscreteJoint(rows.size(), rows.empty() ? 0 : rows.front().size(), flatten(rows)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t d, std::size_t s) const { return table_[d * cols_ + s]; }
  std::span<const double> row(std::size_t d) const { return std::span<const double>(table_).subspan(d * cols_, cols_); }

private:
  static std::vector<double> flatten(const std::vector<std::vector<double>>& rows) {
    std::vector<double> flat;
    for (const auto& r : rows) {
      if (!rows.empty() && r.size() != rows.front().size()) throw ValidationError("joint: ragged table");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> table_;
};

struct ElboDecomposition {
  double elbo;
  double kl_to_posterior;
  double log_evidence;
};

/// Splits ln p(d) into <ln(p(d, s) / q(s))>_q + KL(q, p(s | d)).
inline ElboDecomposition elbo_decomposition(const DiscreteJoint& joint, std::size_t d, const Categorical& q) {
  if (d >= joint.rows()) throw ValidationError("elbo: data index out of range");
  if (q.size() != joint.cols()) throw ValidationError("elbo: q must range over the latent states of the joint");
  const auto row = joint.row(d);
  double marginal = 0.0;
  for (double v : row) marginal += v;
  if (!(marginal > 0.0)) throw ValidationError("elbo: zero marginal probability at the data index");

  double elbo = 0.0;
  for (std::size_t s = 0; s < q.size(); ++s) {
    if (!(q[s] > 0.0)) continue;
    if (!(row[s] > 0.0)) throw ValidationError("elbo: q puts mass on a latent state with zero joint probability");
    elbo += q[s] * (std::log(row[s]) - std::log(q[s]));
  }
  const Categorical posterior = Categorical::normalized({row.begin(), row.end()});
  return {elbo, kl(Density(q), Density(posterior)), std::log(marginal)};
}

} // namespace beliefapprox
