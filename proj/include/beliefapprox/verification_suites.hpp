#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "beliefapprox/axiom_lab.hpp"
#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/scoring.hpp"

// Canned axiom-lab runs behind `beliefapprox verify`. Seeds are fixed, so
// every run reports the same numbers.

namespace beliefapprox {

struct SuiteCheck {
  std::string name;
  bool passed;
  std::string detail;
};

struct SuiteResult {
  explicit SuiteResult(std::string name) : suite(std::move(name)) {}

  std::string suite;
  bool passed = true;
  std::vector<SuiteCheck> checks;

  void add(std::string name, bool ok, std::string detail) {
    passed = passed && ok;
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"properness", "locality", "shape", "splitting", "criterion3"};
  return names;
}

namespace suites {

inline constexpr std::size_t kGridN = 200;
inline constexpr std::size_t kTargetsPerSize = 10;
inline constexpr std::size_t kRandomMeasures = 5;

inline std::string num(double x) { return detail::format_number(x); }

// Uniform m followed by kRandomMeasures random positive measures.
inline std::vector<ReferenceMeasure> measures_for(std::mt19937_64& rng, std::size_t outcomes) {
  std::vector<ReferenceMeasure> ms{ReferenceMeasure::counting()};
  for (std::size_t i = 0; i < kRandomMeasures; ++i) ms.push_back(detail::random_measure(rng, outcomes));
  return ms;
}

struct ProperUnderAll {
  bool proper = true;
  double worst_distance = 0.0;
  double worst_residual = 0.0;
};

inline ProperUnderAll proper_under_all_measures(const LocalLoss& loss, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ProperUnderAll out;
  for (std::size_t outcomes : {std::size_t{2}, std::size_t{3}}) {
    for (std::size_t t = 0; t < kTargetsPerSize; ++t) {
      const Categorical p = detail::random_categorical(rng, outcomes);
      for (const auto& m : measures_for(rng, outcomes)) {
        const auto r = check_properness(loss, p, m, kGridN);
        out.proper = out.proper && r.is_proper_at_resolution;
        out.worst_distance = std::max(out.worst_distance, r.distance_to_p);
        out.worst_residual = std::max(out.worst_residual, *r.lagrange_residual);
      }
    }
  }
  return out;
}

inline SuiteResult properness() {
  SuiteResult s("properness");
  const auto log = proper_under_all_measures(losses::log_loss(), 101);
  s.add("log loss proper on 20 targets x 6 measures", log.proper,
        "max distance " + num(log.worst_distance) + " <= " + num(std::numbers::sqrt2 / kGridN));
  s.add("log loss Lagrange residual < 1e-6", log.worst_residual < 1e-6, "max residual " + num(log.worst_residual));

  const Categorical p({0.3, 0.7});
  const auto brier = check_properness(losses::brier_score(), p, ReferenceMeasure::counting(), kGridN);
  s.add("brier score proper at p = [0.3, 0.7]", brier.is_proper_at_resolution,
        "distance " + num(brier.distance_to_p));
  const auto linear = check_properness(losses::linear_score(), p, ReferenceMeasure::counting(), kGridN);
  s.add("linear score improper at p = [0.3, 0.7]", !linear.is_proper_at_resolution && linear.argmin_q[1] == 1.0,
        "argmin at vertex, distance " + num(linear.distance_to_p));
  return s;
}

inline SuiteResult locality() {
  SuiteResult s("locality");
  bool log_local = true;
  bool brier_nonlocal = true;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    log_local = log_local && check_locality(losses::log_score(), 4, 100, seed).is_local;
    const auto b = check_locality(losses::brier_score(), 4, 100, seed);
    brier_nonlocal = brier_nonlocal && !b.is_local && b.witness.has_value();
  }
  s.add("log score local over 100 seeded runs", log_local, "");
  s.add("brier score non-local with witness over 100 seeded runs", brier_nonlocal, "");
  bool lifted = true;
  for (const auto& member : loss_zoo()) lifted = lifted && check_locality(lift(member.loss), 5).is_local;
  s.add("every lifted local loss is local", lifted, "");
  return s;
}

/// The uniqueness claim as a biconditional over the zoo: proper under every
/// tested measure exactly when x L'(x) is constant and L fits -C ln x + D.
inline SuiteResult shape() {
  SuiteResult s("shape");
  for (const auto& member : loss_zoo()) {
    const auto shape = check_loss_shape(member.loss, 1e-3, 1e3, 64);
    const auto proper = proper_under_all_measures(member.loss, 202);
    const bool agree = shape.in_log_family == proper.proper;
    std::string detail = "log family " + std::string(shape.in_log_family ? "yes" : "no") + ", proper " +
                         (proper.proper ? "yes" : "no") + ", C " + num(shape.fitted_c);
    bool constant_ok = true;
    if (member.known_c) {
      constant_ok = std::abs(shape.fitted_c - *member.known_c) < 1e-6 && std::abs(shape.fitted_d - *member.known_d) < 1e-6;
    }
    s.add("biconditional holds for " + member.loss.name, agree && constant_ok, detail);
  }
  return s;
}

inline SuiteResult splitting() {
  SuiteResult s("splitting");
  const auto r = check_splitting_invariance(Categorical({0.5, 0.5}), Categorical({0.25, 0.75}),
                                            ReferenceMeasure::counting(), losses::log_loss(), 1, 0.4, 0.7);
  s.add("worked example invariant", r.invariant, "discrepancy " + num(r.discrepancy));

  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  bool same = true;
  bool mixed = true;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 3);
    const auto p = detail::random_categorical(rng, k);
    const auto q = detail::random_categorical(rng, k);
    const auto m = detail::random_measure(rng, k);
    const std::size_t index = static_cast<std::size_t>(t) % k;
    const double alpha = unit(rng);
    const double beta = unit(rng);
    const auto a = check_splitting_invariance(p, q, m, losses::log_loss(), index, alpha, alpha);
    const auto b = check_splitting_invariance(p, q, m, losses::log_loss(), index, alpha, beta);
    same = same && a.invariant;
    mixed = mixed && b.invariant;
    worst = std::max({worst, a.discrepancy, b.discrepancy});
  }
  s.add("alpha = beta over 100 random instances", same, "");
  s.add("arbitrary beta over 100 random instances", mixed, "max discrepancy " + num(worst));

  const auto raw = check_splitting_invariance(Categorical({0.5, 0.5}), Categorical({0.25, 0.75}),
                                              ReferenceMeasure::counting(), losses::log_loss(), 1, 0.4, 0.7,
                                              LossArgument::raw_density);
  s.add("loss on raw q is not invariant", !raw.invariant, "discrepancy " + num(raw.discrepancy));
  return s;
}

inline SuiteResult criterion3() {
  SuiteResult s("criterion3");
  const auto c = verify_criterion3(Categorical({0.5, 0.5}), Categorical({0.25, 0.75}));
  s.add("categorical worked example", c.holds, "KL " + num(c.kl_pq));

  std::mt19937_64 rng(404);
  bool all = true;
  for (int t = 0; t < 50; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(t % 5);
    all = all && verify_criterion3(detail::random_categorical(rng, k, 0.0), detail::random_categorical(rng, k, 0.0)).holds;
  }
  s.add("50 random categorical pairs", all, "");

  const auto g = verify_criterion3(Gaussian1D(0.0, 1.0), Gaussian1D(1.0, 2.0));
  const bool close = g.holds && std::abs(g.kl_pq - *g.kl_closed_form) < 1e-5;
  s.add("gaussian pair on a common grid", close, "grid " + num(g.kl_pq) + " vs closed form " + num(*g.kl_closed_form));
  return s;
}

} // namespace suites

inline SuiteResult run_suite(std::string_view name) {
  if (name == "properness") return suites::properness();
  if (name == "locality") return suites::locality();
  if (name == "shape") return suites::shape();
  if (name == "splitting") return suites::splitting();
  if (name == "criterion3") return suites::criterion3();
  throw ValidationError("unknown suite '" + std::string(name) + "'");
}

inline std::vector<SuiteResult> run_suites(std::string_view name) {
  std::vector<SuiteResult> out;
  if (name == "all") {
    for (const auto& n : suite_names()) out.push_back(run_suite(n));
  } else {
    out.push_back(run_suite(name));
  }
  return out;
}

} // namespace beliefapprox
