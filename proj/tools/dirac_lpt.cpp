#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dirac_lpt/report.hpp"

namespace {

enum Exit { ok = 0, usage = 1, config_error = 2, numerical_error = 3 };

dirac_lpt::RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw dirac_lpt::ConfigError("<file>: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return dirac_lpt::parse_config(ss.str());
}

void write_file(const std::string &path, const std::string &text) {
  std::ofstream out(path);
  if (!out)
    throw dirac_lpt::ConfigError("--out: cannot write '" + path + "'");
  out << text;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"dirac-lpt: perturbative Dirac levels in screened Coulomb fields"};
  app.require_subcommand(1);

  std::string config_path, format, out_path;
  int order = -1;
  double tol = 0.0;
  bool inject_fault = false, no_oracle = false, with_oracle = false;

  auto *series = app.add_subcommand("series", "energy corrections and partial sums for one configuration");
  series->add_option("--config", config_path, "JSON configuration")->required();
  series->add_option("--order", order, "override the configured order")->check(CLI::Range(0, dirac_lpt::max_order));
  series->add_option("--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
  series->add_flag("--oracle", with_oracle, "also solve the level numerically");

  auto *table = app.add_subcommand("table1", "six-column screened tungsten table with numerical levels");
  table->add_option("--order", order, "highest order")->check(CLI::Range(0, dirac_lpt::max_order));
  table->add_option("--out", out_path, "also write the table as JSON");
  table->add_flag("--no-oracle", no_oracle, "skip the numerical row");

  auto *oracle = app.add_subcommand("oracle", "numerical level only");
  oracle->add_option("--config", config_path, "JSON configuration")->required();
  oracle->add_option("--tol", tol, "energy tolerance in units of m")->check(CLI::PositiveNumber);

  auto *verify = app.add_subcommand("verify", "run the invariant self-checks");
  verify->add_option("--order", order, "highest order")->check(CLI::Range(3, dirac_lpt::max_order));
  verify->add_flag("--inject-fault", inject_fault, "flip one recursion sign; the dual-path suite must fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*series) {
      auto c = load_config(config_path);
      if (order >= 0)
        c.order = order;
      if (!format.empty())
        c.format = format;
      c.with_oracle = c.with_oracle || with_oracle;
      std::cout << dirac_lpt::render_series(dirac_lpt::compute_series(c), c, c.format);
    } else if (*table) {
      dirac_lpt::Table1Options o;
      if (order >= 0)
        o.order = order;
      o.with_oracle = !no_oracle;
      const auto t = dirac_lpt::run_table1(o);
      std::cout << dirac_lpt::render_table1(t, o.with_oracle);
      if (!out_path.empty())
        write_file(out_path, dirac_lpt::table1_json(t, o.with_oracle).dump(2) + "\n");
    } else if (*oracle) {
      auto c = load_config(config_path);
      if (tol > 0.0)
        c.oracle_tolerance = tol;
      const auto pr = dirac_lpt::resolve(c);
      dirac_lpt::OracleOptions oo;
      oo.tol = c.oracle_tolerance;
      const auto r = dirac_lpt::solve_bound_state(pr.potential, pr.state, pr.m, oo);
      nlohmann::json j = dirac_lpt::oracle_json(r);
      j["config_echo"] = c.echo;
      std::cout << j.dump(2) << '\n';
    } else if (*verify) {
      dirac_lpt::VerifyOptions v;
      if (order >= 0)
        v.order = order;
      v.inject_fault = inject_fault;
      const auto results = dirac_lpt::run_verify(v);
      std::cout << dirac_lpt::render_verify(results);
      for (const auto &r : results)
        if (!r.passed)
          return numerical_error;
    }
  } catch (const dirac_lpt::ConfigError &e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const dirac_lpt::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical_error;
  }
  return ok;
}
