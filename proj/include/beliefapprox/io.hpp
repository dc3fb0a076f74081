#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "beliefapprox/densities.hpp"
#include "beliefapprox/error.hpp"
#include "beliefapprox/quadrature.hpp"

// Distribution spec files and result serialization.
//
//   {"type": "gaussian", "mean": 0, "variance": 1}
//   {"type": "mixture", "weights": [...], "components": [{"mean": ..., "variance": ...}, ...]}
//   {"type": "categorical", "weights": [...], "labels": [...]}        labels optional
//   {"type": "grid", "lo": -8, "hi": 8, "n": 4096, "values": [...]}  "rule" optional
//
// Non-uniform grids replace lo/hi/n by "points": [...].

namespace beliefapprox::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) throw ValidationError("distribution spec must be a JSON object");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(std::string("missing field '") + name + "'");
  return *it;
}

inline double number(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number()) throw ValidationError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

inline std::vector<double> numbers(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw ValidationError(std::string("field '") + name + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(std::string("field '") + name + "' must contain only numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// Re-labels construction errors with the offending field.
template <typename F>
auto in_field(const char* name, F&& make) {
  try {
    return make();
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("field '") + name + "': " + e.what());
  }
}

inline Gaussian1D parse_gaussian(const Json& j) {
  const double mean = number(j, "mean");
  const double variance = number(j, "variance");
  return in_field("variance", [&] { return Gaussian1D(mean, variance); });
}

} // namespace detail

inline Density parse_density(const Json& j) {
  const Json& type = detail::field(j, "type");
  if (!type.is_string()) throw ValidationError("field 'type' must be a string");
  const std::string kind = type.get<std::string>();

  if (kind == "gaussian") return detail::parse_gaussian(j);

  if (kind == "mixture") {
    const auto weights = detail::numbers(j, "weights");
    const Json& comps = detail::field(j, "components");
    if (!comps.is_array()) throw ValidationError("field 'components' must be an array");
    std::vector<Gaussian1D> components;
    for (const auto& c : comps) {
      if (c.contains("type") && c["type"] != "gaussian")
        throw ValidationError("field 'components': every component must be gaussian");
      components.push_back(detail::in_field("components", [&] { return detail::parse_gaussian(c); }));
    }
    return detail::in_field("weights", [&] { return Mixture1D(weights, std::move(components)); });
  }

  if (kind == "categorical") {
    const auto weights = detail::numbers(j, "weights");
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      const Json& l = j["labels"];
      if (!l.is_array()) throw ValidationError("field 'labels' must be an array");
      for (const auto& e : l) {
        if (e.is_string()) {
          labels.push_back(e.get<std::string>());
        } else if (e.is_number()) {
          labels.push_back(beliefapprox::detail::format_number(e.get<double>()));
        } else {
          throw ValidationError("field 'labels' must contain strings or numbers");
        }
      }
    }
    return detail::in_field("weights", [&] { return Categorical(weights, std::move(labels)); });
  }

  if (kind == "grid") {
    auto values = detail::numbers(j, "values");
    IntegrationRule rule = IntegrationRule::simpson;
    if (j.contains("rule")) {
      if (!j["rule"].is_string()) throw ValidationError("field 'rule' must be a string");
      rule = detail::in_field("rule", [&] { return integration_rule_from_string(j["rule"].get<std::string>()); });
    }
    std::vector<double> points;
    if (j.contains("points")) {
      points = detail::numbers(j, "points");
    } else {
      const double lo = detail::number(j, "lo");
      const double hi = detail::number(j, "hi");
      const Json& n = detail::field(j, "n");
      if (!n.is_number_integer() || n.get<long long>() < 3) throw ValidationError("field 'n' must be an integer >= 3");
      if (!(lo < hi)) throw ValidationError("field 'hi' must exceed field 'lo'");
      points = linspace(lo, hi, n.get<std::size_t>());
    }
    if (points.size() != values.size())
      throw ValidationError("field 'values' must have one entry per grid point (" + std::to_string(points.size()) + ")");
    return detail::in_field("values", [&] { return GridDensity(std::move(points), std::move(values), rule); });
  }

  throw ValidationError("field 'type' must be one of gaussian, mixture, categorical, grid (got '" + kind + "')");
}

inline Json to_json(const Density& d) {
  return std::visit(
      [](const auto& dist) -> Json {
        using T = std::decay_t<decltype(dist)>;
        Json j;
        if constexpr (std::is_same_v<T, Gaussian1D>) {
          j["type"] = "gaussian";
          j["mean"] = dist.mean();
          j["variance"] = dist.variance();
        } else if constexpr (std::is_same_v<T, Mixture1D>) {
          j["type"] = "mixture";
          j["weights"] = std::vector<double>(dist.weights().begin(), dist.weights().end());
          Json comps = Json::array();
          for (const auto& c : dist.components())
            comps.push_back(Json{{"type", "gaussian"}, {"mean", c.mean()}, {"variance", c.variance()}});
          j["components"] = std::move(comps);
        } else if constexpr (std::is_same_v<T, Categorical>) {
          j["type"] = "categorical";
          j["weights"] = std::vector<double>(dist.weights().begin(), dist.weights().end());
          if (!dist.labels().empty()) j["labels"] = dist.labels();
        } else {
          j["type"] = "grid";
          if (is_uniform_grid(dist.grid())) {
            j["lo"] = dist.lo();
            j["hi"] = dist.hi();
            j["n"] = dist.size();
          } else {
            j["points"] = std::vector<double>(dist.grid().begin(), dist.grid().end());
          }
          if (dist.rule() != IntegrationRule::simpson) j["rule"] = std::string(to_string(dist.rule()));
          j["values"] = std::vector<double>(dist.values().begin(), dist.values().end());
        }
        return j;
      },
      d);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline Density load_density(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    return parse_density(j);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Every double printed with 17 significant digits.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline void dump_to(const Json& j, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      out += Json(it.key()).dump();
      out += indent < 0 ? ":" : ": ";
      dump_to(it.value(), out, indent, depth + 1);
    }
    newline(depth);
    out += '}';
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    // Flat arrays of scalars stay on one line.
    const bool nested = std::any_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
    out += '[';
    bool first = true;
    for (const auto& e : j) {
      if (!first) out += (indent < 0 || nested) ? "," : ", ";
      first = false;
      if (nested) newline(depth + 1);
      dump_to(e, out, indent, depth + 1);
    }
    if (nested) newline(depth);
    out += ']';
    return;
  }
  case Json::value_t::number_float: {
    const double x = j.get<double>();
    if (std::isfinite(x)) {
      out += format_double(x);
    } else {
      out += std::isnan(x) ? "\"nan\"" : (x > 0 ? "\"inf\"" : "\"-inf\"");
    }
    return;
  }
  default:
    out += j.dump();
  }
}

} // namespace detail

/// JSON text with 17 significant digits per double. Non-finite doubles are
/// written as the strings "inf", "-inf" and "nan".
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_to(j, out, indent, 0);
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

} // namespace beliefapprox::io
