#pragma once

// Orchestration behind the command-line tool: series runs, the six-column
// screened-nucleus table, and the invariant self-check. Everything renders to
// strings so output bytes depend only on the inputs.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac_lpt/analysis.hpp"
#include "dirac_lpt/closed_forms.hpp"
#include "dirac_lpt/config.hpp"
#include "dirac_lpt/engine.hpp"
#include "dirac_lpt/oracle.hpp"

namespace dirac_lpt {

inline std::string format_number(const char *fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

inline std::string round_trip(double x) { return format_number("%.17g", x); }

struct SeriesRun {
  Problem problem;
  EnergySeries series;
  SumSequence sums;
  std::optional<BracketEstimate> bracket;
  std::optional<OracleResult> oracle;
};

inline SeriesRun compute_series(const RunConfig &c, const EngineOptions &opt = {}) {
  Problem pr = resolve(c);
  EnergySeries series = energy_series(pr.potential, pr.state, pr.m, pr.order, opt);
  SumSequence sums = partial_sums(series);
  SeriesRun run{std::move(pr), std::move(series), std::move(sums), std::nullopt, std::nullopt};
  if (run.problem.order >= 3)
    run.bracket = bracket_estimate(run.sums);
  if (c.with_oracle) {
    OracleOptions oo;
    oo.tol = c.oracle_tolerance;
    run.oracle = solve_bound_state(run.problem.potential, run.problem.state, run.problem.m, oo);
  }
  return run;
}

inline nlohmann::json oracle_json(const OracleResult &r) {
  return {{"binding", r.binding},       {"energy", r.E_num},   {"nodes", r.node_count},
          {"residual", r.residual},     {"iterations", r.iterations}, {"bracket_width", r.bracket_width}};
}

inline std::string render_series(const SeriesRun &run, const RunConfig &c, const std::string &format) {
  const auto &E = run.series.corrections;
  const auto &B = run.sums.binding_sums;
  std::ostringstream os;
  if (format == "json") {
    nlohmann::json j;
    j["config_echo"] = c.echo;
    j["unit"] = c.unit;
    j["state"] = {{"s", run.problem.state.s}, {"l", run.problem.state.l}, {"n_r", run.problem.state.n_r}};
    j["corrections"] = E;
    j["binding_sums"] = B;
    if (run.bracket)
      j["bracket"] = {{"estimate", run.bracket->estimate},
                      {"gap", run.bracket->gap},
                      {"k_star", run.bracket->k_star},
                      {"bracketing", run.bracket->bracketing}};
    if (run.oracle)
      j["oracle"] = oracle_json(*run.oracle);
    j["diagnostics"] = {{"max_dual_residual", run.series.max_dual_residual},
                        {"max_residue", run.series.max_residue},
                        {"all_bound", run.series.all_bound}};
    os << j.dump(2) << '\n';
    return os.str();
  }
  if (format == "csv") {
    os << "k,E_k,binding_sum\n";
    for (std::size_t k = 0; k < E.size(); ++k)
      os << k << ',' << round_trip(E[k]) << ',' << round_trip(B[k]) << '\n';
    return os.str();
  }
  os << "# " << describe(run.problem.state) << "  " << run.series.potential_label << "  m = " << run.problem.m << ' '
     << c.unit << '\n';
  os << "  k              E_k      binding sum\n";
  for (std::size_t k = 0; k < E.size(); ++k) {
    char line[96];
    std::snprintf(line, sizeof line, "%3zu  %+.9e  %14.6f\n", k, E[k], B[k]);
    os << line;
  }
  if (run.bracket) {
    os << "estimate " << format_number("%.6f", run.bracket->estimate) << " +- "
       << format_number("%.2e", run.bracket->gap) << " (k* = " << run.bracket->k_star << ')';
    if (!run.bracket->bracketing)
      os << "  warning: partial sums do not bracket";
    os << '\n';
  }
  if (run.oracle)
    os << "numerical " << format_number("%.6f", run.oracle->binding) << "  (F zeros " << run.oracle->node_count
       << ", residual " << format_number("%.1e", run.oracle->residual) << ")\n";
  return os.str();
}

// ---------------------------------------------------------------- table

struct TableColumn {
  std::string name; ///< e.g. "E_V s=+1"
  Mix mix;
  QuantumNumbers state;
  std::vector<double> binding_sums;
  BracketEstimate bracket;
  OracleResult oracle;
};

struct Table1 {
  double m = 0.0;
  double alpha = 0.0;
  int z = 0;
  int order = 0;
  std::vector<TableColumn> columns;
};

struct Table1Options {
  double m = 511.0034;
  double alpha = 1.0 / 137.036;
  int z = 74;
  double screening_coefficient = 1.13;
  int order = 15;
  bool with_oracle = true;
  bool concurrent = true;
};

/// The six default columns: mixes vector, scalar, mixed for s = +1 (l = 1)
/// then the same for s = -1 (l = 0), all with n_r = 1.
inline std::vector<std::pair<Mix, QuantumNumbers>> table1_layout() {
  std::vector<std::pair<Mix, QuantumNumbers>> out;
  for (const auto &q : {make_state(1, 1, 1), make_state(-1, 0, 1)})
    for (Mix mix : {Mix::vector, Mix::scalar, Mix::mixed})
      out.emplace_back(mix, q);
  return out;
}

inline PotentialSpec recipe_spec(Mix mix, const Table1Options &o) {
  const auto r = recipe_parameters(mix, o.alpha, o.z, o.screening_coefficient);
  return yukawa_spec(r.a_v, r.lambda * o.m, r.a_s, r.mu * o.m, o.order);
}

inline TableColumn table1_column(Mix mix, const QuantumNumbers &q, const Table1Options &o) {
  static const char *tag[] = {"E_V", "E_W", "E_VW"};
  TableColumn col;
  col.name = std::string(tag[static_cast<int>(mix)]) + (q.s == 1 ? " s=+1" : " s=-1");
  col.mix = mix;
  col.state = q;
  const PotentialSpec p = recipe_spec(mix, o);
  col.binding_sums = partial_sums(energy_series(p, q, o.m, o.order)).binding_sums;
  if (o.order >= 3) {
    SumSequence seq;
    seq.binding_sums = col.binding_sums;
    col.bracket = bracket_estimate(seq);
  }
  if (o.with_oracle)
    col.oracle = solve_bound_state(p, q, o.m);
  return col;
}

inline Table1 run_table1(const Table1Options &o = {}) {
  if (o.order < 0 || o.order > max_order)
    throw ConfigError("order: must be in [0, " + std::to_string(max_order) + "]");
  Table1 t{o.m, o.alpha, o.z, o.order, {}};
  const auto layout = table1_layout();
  if (o.concurrent) {
    std::vector<std::future<TableColumn>> jobs;
    for (const auto &[mix, q] : layout)
      jobs.push_back(std::async(std::launch::async, table1_column, mix, q, std::cref(o)));
    for (auto &j : jobs)
      t.columns.push_back(j.get());
  } else {
    for (const auto &[mix, q] : layout)
      t.columns.push_back(table1_column(mix, q, o));
  }
  return t;
}

inline std::string render_table1(const Table1 &t, bool with_oracle = true) {
  std::ostringstream os;
  os << "# binding energies (keV), z = " << t.z << ", m = " << t.m << ", 1/alpha = " << 1.0 / t.alpha << '\n';
  os << "  k";
  for (const auto &c : t.columns)
    os << std::string(c.name.size() < 14 ? 14 - c.name.size() : 0, ' ') << c.name;
  os << '\n';
  for (int k = 0; k <= t.order; ++k) {
    os << format_number("%3.0f", static_cast<double>(k));
    for (const auto &c : t.columns)
      os << format_number("%14.6f", c.binding_sums[static_cast<std::size_t>(k)]);
    os << '\n';
  }
  if (with_oracle) {
    os << "num";
    for (const auto &c : t.columns)
      os << format_number("%14.6f", c.oracle.binding);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json table1_json(const Table1 &t, bool with_oracle = true) {
  nlohmann::json j;
  j["constants"] = {{"m", t.m}, {"alpha", t.alpha}, {"z", t.z}, {"unit", "keV"}};
  j["order"] = t.order;
  j["columns"] = nlohmann::json::array();
  for (const auto &c : t.columns) {
    nlohmann::json col = {{"name", c.name},
                          {"mix", to_string(c.mix)},
                          {"state", {{"s", c.state.s}, {"l", c.state.l}, {"n_r", c.state.n_r}}},
                          {"binding_sums", c.binding_sums}};
    if (t.order >= 3)
      col["bracket"] = {{"estimate", c.bracket.estimate},
                        {"gap", c.bracket.gap},
                        {"k_star", c.bracket.k_star},
                        {"bracketing", c.bracket.bracketing}};
    if (with_oracle)
      col["oracle"] = oracle_json(c.oracle);
    j["columns"].push_back(col);
  }
  return j;
}

// ---------------------------------------------------------------- verify

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0; ///< worst residual seen, relative unless stated
  double limit = 0.0;
  std::string detail;
};

struct VerifyOptions {
  int order = 15;
  /// Fault injection: flips one sign in the row recursion and disables the
  /// residue check so the dual-path comparison has to catch it.
  bool inject_fault = false;
  unsigned seed = 20240611;
};

namespace detail {

inline EngineOptions verify_engine_options(const VerifyOptions &v) {
  EngineOptions e;
  if (v.inject_fault) {
    e.mutate_row_recursion = true;
    e.check_residues = false;
  }
  // The suites measure the residuals themselves; do not let energy_series stop early.
  e.dual_path_tolerance = std::numeric_limits<double>::infinity();
  return e;
}

inline double rel_diff(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

// Runs one suite body, turning library errors into a failure line.
inline SuiteResult run_suite(const std::string &name, double limit, const std::function<double(std::string &)> &body) {
  SuiteResult r{name, false, 0.0, limit, {}};
  try {
    r.worst = body(r.detail);
    r.passed = r.worst <= limit;
  } catch (const Error &e) {
    r.worst = std::numeric_limits<double>::infinity();
    r.detail = e.what();
  }
  return r;
}

// Table-1-like configurations plus some random ones, m = 1 units.
inline std::vector<std::pair<PotentialSpec, QuantumNumbers>> verify_cases(int K, unsigned seed) {
  std::vector<std::pair<PotentialSpec, QuantumNumbers>> out;
  Table1Options o;
  o.m = 1.0;
  o.order = K;
  for (const auto &[mix, q] : table1_layout())
    out.emplace_back(recipe_spec(mix, o), q);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> strength(0.1, 0.6), screen(0.005, 0.1);
  for (int i = 0; i < 6; ++i) {
    const auto q = i % 2 == 0 ? make_state(1, 1 + i / 2, 1 + i / 3) : make_state(-1, i / 2, 1 + i / 3);
    out.emplace_back(yukawa_spec(strength(rng), screen(rng), strength(rng) * 0.5, screen(rng), K), q);
  }
  return out;
}

} // namespace detail

inline std::vector<SuiteResult> run_verify(const VerifyOptions &v = {}) {
  const EngineOptions eo = detail::verify_engine_options(v);
  const auto cases = detail::verify_cases(v.order, v.seed);
  std::vector<SuiteResult> out;

  out.push_back(detail::run_suite("coulomb nullity", 1e-10, [&](std::string &d) {
    double worst = 0.0;
    int n = 0;
    for (double a : {0.1, 0.3, 0.54})
      for (double b : {0.0, 0.2})
        for (const auto &q : {make_state(1, 1, 1), make_state(-1, 0, 1), make_state(-1, 1, 2), make_state(1, 2, 3)}) {
          const auto s = energy_series(coulomb_spec(a, b, 10), q, 1.0, 10, eo);
          for (int k = 1; k <= 10; ++k)
            worst = std::max(worst, std::abs(s.corrections[static_cast<std::size_t>(k)]));
          ++n;
        }
    d = std::to_string(n) + " pure Coulomb series, max |E_k|/m for k = 1..10";
    return worst;
  }));

  out.push_back(detail::run_suite("dual path", 1e-9, [&](std::string &d) {
    double worst = 0.0;
    for (const auto &[p, q] : cases)
      worst = std::max(worst, energy_series(p, q, 1.0, v.order, eo).max_dual_residual);
    d = std::to_string(cases.size()) + " screened configurations through order " + std::to_string(v.order);
    return worst;
  }));

  out.push_back(detail::run_suite("residue identities", 1e-9, [&](std::string &d) {
    double worst = 0.0;
    for (const auto &[p, q] : cases)
      worst = std::max(worst, energy_series(p, q, 1.0, v.order, eo).max_residue);
    d = "max |R^{k+1}_k - N delta_k0| over all orders, scaled";
    return worst;
  }));

  out.push_back(detail::run_suite("scaling covariance", 1e-12, [&](std::string &d) {
    double worst = 0.0;
    for (const auto &[p, q] : cases) {
      const auto base = energy_series(p, q, 1.0, v.order, eo);
      for (double sigma : {0.5, 2.0, 10.0}) {
        const auto scaled = energy_series(rescaled(p, sigma), q, sigma, v.order, eo);
        for (int k = 0; k <= v.order; ++k) {
          const double ref = sigma * base.corrections[static_cast<std::size_t>(k)];
          worst = std::max(worst, detail::rel_diff(scaled.corrections[static_cast<std::size_t>(k)], ref, 1e-300));
        }
      }
    }
    d = "E_k(sigma m, sigma^i V_i, sigma^i W_i) vs sigma E_k, sigma in {0.5, 2, 10}";
    return worst;
  }));

  out.push_back(detail::run_suite("closed forms, mixed", 1e-10, [&](std::string &d) {
    std::mt19937 rng(v.seed + 1);
    std::uniform_real_distribution<double> A(0.1, 0.6), Bs(0.0, 0.6), S(0.005, 0.1);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double a = A(rng), b = Bs(rng), lam = S(rng), mu = S(rng);
      const auto q = i % 2 == 0 ? make_state(1, 1, 1) : make_state(-1, 0, 1);
      const auto s = energy_series(yukawa_spec(a, lam, b, mu, 3), q, 1.0, 3, eo);
      const auto cf = closed_forms::yukawa_closed_form(closed_forms::make_inputs(q, a, b, lam, mu));
      for (int k = 0; k <= 3; ++k)
        worst = std::max(worst, detail::rel_diff(s.corrections[static_cast<std::size_t>(k)],
                                                 cf[static_cast<std::size_t>(k)], 1e-300));
    }
    d = "100 random vector/scalar Yukawa points, orders 0..3";
    return worst;
  }));

  out.push_back(detail::run_suite("closed forms, vector", 1e-9, [&](std::string &d) {
    std::mt19937 rng(v.seed + 2);
    std::uniform_real_distribution<double> A(0.1, 0.6), C(-0.3, 0.3);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double a = A(rng);
      std::vector<double> V{-a}, W(6, 0.0);
      for (int j = 1; j <= 5; ++j)
        V.push_back(C(rng));
      const auto q = i % 2 == 0 ? make_state(1, 1, 1) : make_state(-1, 0, 1);
      const auto p = custom_spec(V, W);
      const auto s = energy_series(p, q, 1.0, 5, eo);
      const auto normalized = closed_forms::normalized_vector_coeffs(p.vector_coeffs());
      const auto cf = closed_forms::vector_closed_form(normalized, closed_forms::make_inputs(q, a, 0.0));
      // Relative to the size of the order, so a near-zero E_k is not over-weighted.
      for (int k = 0; k <= 5; ++k)
        worst = std::max(worst, detail::rel_diff(s.corrections[static_cast<std::size_t>(k)],
                                                 cf[static_cast<std::size_t>(k)], 1e-12));
    }
    d = "50 random pure-vector coefficient lists, orders 0..5";
    return worst;
  }));

  return out;
}

inline std::string render_verify(const std::vector<SuiteResult> &results) {
  std::ostringstream os;
  for (const auto &r : results) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-22s worst %.3e  limit %.0e  %s\n", r.passed ? "ok" : "FAIL",
                  r.name.c_str(), r.worst, r.limit, r.detail.c_str());
    os << line;
  }
  return os.str();
}

} // namespace dirac_lpt
