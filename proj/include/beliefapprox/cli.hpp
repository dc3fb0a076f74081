#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "beliefapprox/approximators.hpp"
#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/estimators.hpp"
#include "beliefapprox/io.hpp"
#include "beliefapprox/scoring.hpp"
#include "beliefapprox/verification_suites.hpp"

namespace beliefapprox::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kNumerical = 2 };

namespace detail {

using io::Json;

inline double convert(double nats, bool bits) { return bits ? nats_to_bits(nats) : nats; }

inline std::optional<QuadratureWindow> window_from(const std::optional<double>& lo, const std::optional<double>& hi,
                                                   const std::optional<std::size_t>& n) {
  if (!lo && !hi && !n) return std::nullopt;
  if (!lo || !hi) throw ValidationError("field '--lo'/'--hi': both bounds are required for a window override");
  if (!(*lo < *hi)) throw ValidationError("field '--hi' must exceed field '--lo'");
  QuadratureWindow w{*lo, *hi};
  if (n) {
    if (*n < 16) throw ValidationError("field '--n' must be at least 16");
    w.n = *n;
  }
  return w;
}

// "MU[,VAR]" for gaussians, "P1,P2,..." for categoricals.
inline std::vector<double> parse_list(const std::string& text, const char* field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto v = beliefapprox::detail::parse_number(item);
    if (!v) throw ValidationError(std::string("field '") + field + "': '" + item + "' is not a number");
    out.push_back(*v);
  }
  if (out.empty()) throw ValidationError(std::string("field '") + field + "' is empty");
  return out;
}

inline Json fit_to_json(const FitReport& r, bool bits) {
  Json j;
  j["direction"] = std::string(to_string(r.direction));
  j["fitted"] = io::to_json(r.fitted);
  j["divergence_value"] = convert(r.divergence_value, bits);
  j["units"] = bits ? "bits" : "nats";
  j["initial_point"] = r.initial_point;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  Json runs = Json::array();
  for (const auto& m : r.multistart_results) {
    Json e;
    e["initial_point"] = m.initial_point;
    e["final_parameters"] = m.final_parameters;
    e["final_value"] = convert(m.final_value, bits);
    e["iterations"] = m.iterations;
    e["converged"] = m.converged;
    runs.push_back(std::move(e));
  }
  j["multistart_results"] = std::move(runs);
  return j;
}

inline Json gaussian_json(const Density& d) {
  const auto& g = std::get<Gaussian1D>(d);
  return Json{{"mean", g.mean()}, {"variance", g.variance()}};
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace detail

/// Runs one subcommand. argv excludes the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  using detail::Json;

  CLI::App app{"Approximate beliefs by minimizing KL divergence; check the scoring axioms numerically."};
  app.name("beliefapprox");
  app.require_subcommand(1, 1);

  // divergence
  auto* div = app.add_subcommand("divergence", "KL in both directions and cross entropy between two specs");
  std::string div_p, div_q;
  bool div_bits = false;
  std::optional<double> div_lo, div_hi;
  std::optional<std::size_t> div_n;
  div->add_option("--p", div_p, "belief spec file")->required();
  div->add_option("--q", div_q, "approximation spec file")->required();
  div->add_flag("--bits", div_bits, "report bits instead of nats");
  div->add_option("--lo", div_lo, "quadrature window lower bound");
  div->add_option("--hi", div_hi, "quadrature window upper bound");
  div->add_option("--n", div_n, "quadrature nodes");

  // estimate
  auto* est = app.add_subcommand("estimate", "point estimate under an estimation loss");
  std::string est_spec, est_loss;
  est->add_option("--spec", est_spec, "belief spec file")->required();
  est->add_option("--loss", est_loss, "mode | median | mean")->required();

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "fit a parametric family to a target");
  std::string fit_target, fit_family = "gaussian", fit_direction = "approx", fit_init;
  bool fit_bits = false;
  fit_cmd->add_option("--target", fit_target, "target spec file")->required();
  fit_cmd->add_option("--family", fit_family, "gaussian | categorical");
  fit_cmd->add_option("--direction", fit_direction, "approx | infer");
  fit_cmd->add_option("--init", fit_init, "MU[,VAR] or P1,...,PK");
  fit_cmd->add_flag("--bits", fit_bits, "report bits instead of nats");

  // verify
  auto* ver = app.add_subcommand("verify", "run axiom-lab suites");
  std::string ver_suite = "all", ver_report = "verify_report.json";
  ver->add_option("--suite", ver_suite, "properness | locality | shape | splitting | criterion3 | all");
  ver->add_option("--report", ver_report, "JSON report path");

  // figure1
  auto* fig = app.add_subcommand("figure1", "bimodal target fitted in both KL directions");
  double fig_sep = 3.0, fig_var = 1.0;
  std::size_t fig_points = 401;
  std::string fig_out;
  fig->add_option("--separation", fig_sep, "component means at +-separation");
  fig->add_option("--variance", fig_var, "component variance");
  fig->add_option("--points", fig_points, "plot rows");
  fig->add_option("--out", fig_out, "CSV path; parameters go to the same path with .json")->required();

  std::vector<const char*> raw{"beliefapprox"};
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }

  try {
    if (*div) {
      const auto window = detail::window_from(div_lo, div_hi, div_n);
      const Density p = io::load_density(div_p);
      const Density q = io::load_density(div_q);
      Json j;
      j["kl_pq"] = detail::convert(kl(p, q, window), div_bits);
      j["kl_qp"] = detail::convert(kl(q, p, window), div_bits);
      j["cross_entropy"] = detail::convert(cross_entropy_m(p, q, ReferenceMeasure::counting(), window), div_bits);
      j["units"] = div_bits ? "bits" : "nats";
      out << io::dump(j) << "\n";
      return kOk;
    }

    if (*est) {
      const auto loss = EstimationLoss::from_string(est_loss);
      const Density p = io::load_density(est_spec);
      out << io::format_double(estimate(p, loss)) << "\n";
      return kOk;
    }

    if (*fit_cmd) {
      const Density p = io::load_density(fit_target);
      const FitDirection direction = fit_direction_from_string(fit_direction);
      std::optional<ParametricFamily> family;
      if (fit_family == "gaussian") {
        family = ParametricFamily::gaussian();
      } else if (fit_family == "categorical") {
        const auto* c = std::get_if<Categorical>(&p);
        if (!c) throw ValidationError("field '--family': categorical needs a categorical target");
        family = ParametricFamily::categorical(c->size());
      } else {
        throw ValidationError("field '--family' must be gaussian or categorical (got '" + fit_family + "')");
      }
      FitOptions options;
      if (!fit_init.empty()) {
        auto init = detail::parse_list(fit_init, "--init");
        if (family->kind() == ParametricFamily::Kind::gaussian1d) {
          if (init.size() == 1) init.push_back(1.0);
          if (init.size() != 2) throw ValidationError("field '--init': expected MU[,VAR]");
        }
        options.init = init;
      }
      const FitReport report = fit(p, *family, direction, options);
      out << io::dump(detail::fit_to_json(report, fit_bits)) << "\n";
      if (!report.converged) err << "warning: best start did not meet the convergence tolerances\n";
      return kOk;
    }

    if (*ver) {
      if (ver_suite != "all" && std::find(suite_names().begin(), suite_names().end(), ver_suite) == suite_names().end())
        throw ValidationError("field '--suite' must be one of properness, locality, shape, splitting, criterion3, all");
      const auto results = run_suites(ver_suite);
      bool all = true;
      Json report = Json::array();
      for (const auto& s : results) {
        all = all && s.passed;
        Json checks = Json::array();
        for (const auto& c : s.checks) {
          out << (c.passed ? "PASS  " : "FAIL  ") << detail::pad(s.suite, 12) << c.name;
          if (!c.detail.empty()) out << "  (" << c.detail << ")";
          out << "\n";
          checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        report.push_back(Json{{"suite", s.suite}, {"passed", s.passed}, {"checks", std::move(checks)}});
      }
      out << (all ? "all suites passed" : "some checks failed") << "\n";
      io::write_text_file(ver_report, io::dump(Json{{"passed", all}, {"suites", std::move(report)}}) + "\n");
      err << "report written to " << ver_report << "\n";
      return all ? kOk : kNumerical;
    }

    if (*fig) {
      if (!(fig_var > 0.0)) throw ValidationError("field '--variance' must be positive");
      const auto r = figure1_demo(fig_sep, fig_var, fig_points);
      std::string csv = "s,p,q_approx,q_infer\n";
      for (const auto& row : r.table) {
        csv += io::format_double(row.s) + "," + io::format_double(row.p) + "," + io::format_double(row.q_approx) + "," +
               io::format_double(row.q_infer) + "\n";
      }
      io::write_text_file(fig_out, csv);
      Json side;
      side["separation"] = r.separation;
      side["component_variance"] = r.component_variance;
      side["approximation"] = detail::gaussian_json(r.approximation.fitted);
      side["inference_plus"] = detail::gaussian_json(r.inference_plus.fitted);
      side["inference_minus"] = detail::gaussian_json(r.inference_minus.fitted);
      side["kl_p_approx"] = r.kl_p_approx;
      side["kl_p_infer"] = r.kl_p_infer;
      const std::string sidecar = std::filesystem::path(fig_out).replace_extension(".json").string();
      io::write_text_file(sidecar, io::dump(side) + "\n");
      err << "wrote " << fig_out << " and " << sidecar << "\n";
      return kOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kValidation;
}

} // namespace beliefapprox::cli
