#pragma once

// JSON run configuration. Example:
//
//   {
//     "mass": 511.0034, "unit": "keV", "alpha": 0.0072973525205, "z": 74,
//     "potential": { "kind": "recipe", "mix": "vector" },
//     "state": { "s": 1, "l": 1, "n_r": 1 },
//     "order": 15, "format": "table", "oracle_tolerance": 1e-12
//   }
//
// Potential kinds:
//   recipe   screened nucleus, a = alpha z, screen = c alpha z^{1/3} m
//            (c = "screening_coefficient", default 1.13); "mix" is vector,
//            scalar or mixed. The mixed case splits the charge, each
//            component using the recipe at z/2.
//   yukawa   {"vector": {"strength", "screen"}, "scalar": {...}}, screens in
//            units of m.
//   coulomb  {"vector_strength", "scalar_strength"}.
//   custom   {"vector_coeffs": [...], "scalar_coeffs": [...]}, coefficient i
//            in unit^i.

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac_lpt/errors.hpp"
#include "dirac_lpt/potentials.hpp"
#include "dirac_lpt/states.hpp"

namespace dirac_lpt {

inline constexpr int max_order = 64;

enum class Mix { vector, scalar, mixed };

inline const char *to_string(Mix mix) {
  switch (mix) {
  case Mix::vector:
    return "vector";
  case Mix::scalar:
    return "scalar";
  case Mix::mixed:
    return "mixed";
  }
  return "?";
}

struct RunConfig {
  double mass = 511.0034;
  std::string unit = "keV";
  double alpha = 1.0 / 137.036;
  int z = 74;
  double screening_coefficient = 1.13;
  nlohmann::json potential = {{"kind", "recipe"}, {"mix", "vector"}};
  int s = -1;
  int l = 0;
  int n_r = 1;
  int order = 15;
  std::string format = "table";
  double oracle_tolerance = 1e-12;
  bool with_oracle = false;
  nlohmann::json echo; ///< the document as read, echoed into JSON output
};

/// Everything the engine and oracle need, resolved from a RunConfig.
struct Problem {
  PotentialSpec potential;
  QuantumNumbers state;
  double m;
  int order;
};

namespace detail {

template <typename T> T field(const nlohmann::json &j, const char *key, const std::string &path, T fallback) {
  if (!j.contains(key))
    return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw ConfigError(path + key + ": wrong type");
  }
}

template <typename T> T required(const nlohmann::json &j, const char *key, const std::string &path) {
  if (!j.contains(key))
    throw ConfigError(path + key + ": missing");
  return field<T>(j, key, path, T{});
}

inline void require(bool ok, const std::string &path, const std::string &what) {
  if (!ok)
    throw ConfigError(path + ": " + what);
}

} // namespace detail

inline RunConfig parse_config(const nlohmann::json &doc) {
  using detail::field;
  if (!doc.is_object())
    throw ConfigError("<root>: expected a JSON object");
  RunConfig c;
  c.echo = doc;
  c.mass = field(doc, "mass", "", c.mass);
  c.unit = field(doc, "unit", "", c.unit);
  c.alpha = field(doc, "alpha", "", c.alpha);
  c.z = field(doc, "z", "", c.z);
  c.screening_coefficient = field(doc, "screening_coefficient", "", c.screening_coefficient);
  c.order = field(doc, "order", "", c.order);
  c.format = field(doc, "format", "", c.format);
  c.oracle_tolerance = field(doc, "oracle_tolerance", "", c.oracle_tolerance);
  c.with_oracle = field(doc, "oracle", "", c.with_oracle);
  if (doc.contains("potential")) {
    detail::require(doc["potential"].is_object(), "potential", "expected an object");
    c.potential = doc["potential"];
  }
  if (doc.contains("state")) {
    const auto &st = doc["state"];
    detail::require(st.is_object(), "state", "expected an object");
    c.s = detail::required<int>(st, "s", "state.");
    c.l = detail::required<int>(st, "l", "state.");
    c.n_r = detail::required<int>(st, "n_r", "state.");
  }

  detail::require(std::isfinite(c.mass) && c.mass > 0.0, "mass", "must be positive");
  detail::require(std::isfinite(c.alpha) && c.alpha > 0.0, "alpha", "must be positive");
  detail::require(c.z > 0, "z", "must be positive");
  detail::require(c.order >= 0 && c.order <= max_order, "order", "must be in [0, " + std::to_string(max_order) + "]");
  detail::require(c.format == "table" || c.format == "csv" || c.format == "json", "format",
                  "must be table, csv or json");
  detail::require(c.oracle_tolerance > 0.0, "oracle_tolerance", "must be positive");
  return c;
}

inline RunConfig parse_config(const std::string &text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

/// Screened-nucleus recipe for one mix; strengths and screens in m = 1 units.
struct RecipeParameters {
  double a_v = 0.0, lambda = 0.0, a_s = 0.0, mu = 0.0;
};

inline RecipeParameters recipe_parameters(Mix mix, double alpha, int z, double coefficient = 1.13) {
  const double zeff = mix == Mix::mixed ? 0.5 * z : static_cast<double>(z);
  const double a = alpha * zeff;
  const double screen = coefficient * alpha * std::cbrt(zeff);
  switch (mix) {
  case Mix::vector:
    return {a, screen, 0.0, 0.0};
  case Mix::scalar:
    return {0.0, 0.0, a, screen};
  case Mix::mixed:
    return {a, screen, a, screen};
  }
  return {};
}

inline Mix parse_mix(const std::string &s, const std::string &path) {
  if (s == "vector")
    return Mix::vector;
  if (s == "scalar")
    return Mix::scalar;
  if (s == "mixed")
    return Mix::mixed;
  throw ConfigError(path + ": unknown mix '" + s + "'");
}

inline Problem resolve(const RunConfig &c) {
  using detail::field;
  const auto &pj = c.potential;
  const std::string kind = field<std::string>(pj, "kind", "potential.", "recipe");
  const int K = c.order;
  const double m = c.mass;

  QuantumNumbers state;
  try {
    state = make_state(c.s, c.l, c.n_r);
  } catch (const Error &e) {
    throw ConfigError(std::string("state: ") + e.what());
  }

  auto build = [&]() -> PotentialSpec {
    if (kind == "recipe") {
      const Mix mix = parse_mix(field<std::string>(pj, "mix", "potential.", "vector"), "potential.mix");
      const double coef = field(pj, "screening_coefficient", "potential.", c.screening_coefficient);
      const auto r = recipe_parameters(mix, c.alpha, c.z, coef);
      return yukawa_spec(r.a_v, r.lambda * m, r.a_s, r.mu * m, K);
    }
    if (kind == "yukawa") {
      auto comp = [&](const char *name) -> std::pair<double, double> {
        if (!pj.contains(name))
          return {0.0, 0.0};
        const std::string path = std::string("potential.") + name + ".";
        detail::require(pj[name].is_object(), std::string("potential.") + name, "expected an object");
        return {field(pj[name], "strength", path, 0.0), field(pj[name], "screen", path, 0.0)};
      };
      const auto [a, lam] = comp("vector");
      const auto [b, mu] = comp("scalar");
      return yukawa_spec(a, lam * m, b, mu * m, K);
    }
    if (kind == "coulomb")
      return coulomb_spec(field(pj, "vector_strength", "potential.", 0.0),
                          field(pj, "scalar_strength", "potential.", 0.0), K);
    if (kind == "custom") {
      auto v = detail::required<std::vector<double>>(pj, "vector_coeffs", "potential.");
      auto w = detail::required<std::vector<double>>(pj, "scalar_coeffs", "potential.");
      detail::require(static_cast<int>(v.size()) > K, "potential.vector_coeffs",
                      "needs at least order + 1 = " + std::to_string(K + 1) + " entries");
      detail::require(v.size() == w.size(), "potential.scalar_coeffs", "length differs from vector_coeffs");
      return custom_spec(std::move(v), std::move(w));
    }
    throw ConfigError("potential.kind: unknown kind '" + kind + "'");
  };

  try {
    return Problem{build(), state, m, K};
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
}

} // namespace dirac_lpt
