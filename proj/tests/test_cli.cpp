#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "dirac_lpt/report.hpp"
#include "table1_reference.hpp"

using namespace dirac_lpt;

namespace {

RunConfig vector_config(int order = 15) {
  return parse_config(R"({"potential": {"kind": "recipe", "mix": "vector"},
                          "state": {"s": 1, "l": 1, "n_r": 1}, "order": )" +
                      std::to_string(order) + "}");
}

std::string config_error_of(const std::string &text) {
  try {
    resolve(parse_config(text));
  } catch (const ConfigError &e) {
    return e.what();
  }
  return "";
}

int run_exe(const std::string &args, std::string *out = nullptr) {
  const std::string cmd = std::string(DIRAC_LPT_EXE) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return -1;
  std::string text;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe))
    text += buf;
  const int status = pclose(pipe);
  if (out)
    *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string write_temp(const std::string &name, const std::string &text) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << text;
  return path;
}

} // namespace

TEST(Config, Defaults) {
  const auto c = parse_config(std::string("{}"));
  EXPECT_DOUBLE_EQ(c.mass, 511.0034);
  EXPECT_DOUBLE_EQ(c.alpha, 1.0 / 137.036);
  EXPECT_EQ(c.z, 74);
  EXPECT_EQ(c.unit, "keV");
  EXPECT_EQ(c.order, 15);
  EXPECT_EQ(c.format, "table");
}

TEST(Config, FieldPathDiagnostics) {
  EXPECT_NE(config_error_of(R"({"order": 65})").find("order"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"mass": -1})").find("mass"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"format": "xml"})").find("format"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"state": {"s": 1, "l": 0, "n_r": 1}})").find("state"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"state": {"s": 1, "l": 1}})").find("state.n_r"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"state": {"s": "up", "l": 1, "n_r": 1}})").find("state.s"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"potential": {"kind": "gauss"}})").find("potential.kind"), std::string::npos);
  EXPECT_NE(config_error_of(R"({"potential": {"kind": "recipe", "mix": "both"}})").find("potential.mix"),
            std::string::npos);
  EXPECT_NE(config_error_of(R"({"order": 3, "potential": {"kind": "custom", "vector_coeffs": [-0.5],
                                "scalar_coeffs": [0]}})")
                .find("potential.vector_coeffs"),
            std::string::npos);
  EXPECT_NE(config_error_of(R"({"potential": {"kind": "yukawa", "vector": {"strength": -0.2}}})").find("potential"),
            std::string::npos);
  EXPECT_NE(config_error_of("{not json").find("invalid JSON"), std::string::npos);
  EXPECT_NE(config_error_of("[1, 2]").find("object"), std::string::npos);
}

TEST(Config, RecipeParameters) {
  const auto v = recipe_parameters(Mix::vector, 1.0 / 137.036, 74);
  EXPECT_NEAR(v.a_v, 0.540004, 1e-6);
  EXPECT_NEAR(v.lambda, 0.0346195, 1e-6);
  EXPECT_EQ(v.a_s, 0.0);
  const auto m = recipe_parameters(Mix::mixed, 1.0 / 137.036, 74);
  EXPECT_NEAR(m.a_v, 0.270002, 1e-6);
  EXPECT_DOUBLE_EQ(m.a_v, m.a_s);
  EXPECT_DOUBLE_EQ(m.lambda, 1.13 / 137.036 * std::cbrt(37.0));
}

TEST(Series, VectorConfigMatchesReferenceColumn) {
  const auto run = compute_series(vector_config());
  ASSERT_EQ(run.sums.binding_sums.size(), 16u);
  for (std::size_t k = 0; k < 16; ++k)
    EXPECT_NEAR(run.sums.binding_sums[k], reference::partial_sums[k][0], 2e-3);
  ASSERT_TRUE(run.bracket.has_value());
  EXPECT_EQ(run.bracket->k_star, 15);
}

TEST(Series, CoulombRowsVanish) {
  const auto c = parse_config(std::string(R"({"potential": {"kind": "coulomb", "vector_strength": 0.4},
                                              "state": {"s": -1, "l": 0, "n_r": 1}, "order": 8})"));
  const auto run = compute_series(c);
  for (std::size_t k = 1; k < run.series.corrections.size(); ++k)
    EXPECT_EQ(run.series.corrections[k], 0.0);
}

TEST(Series, OrderZeroSingleRow) {
  const auto c = vector_config(0);
  const auto run = compute_series(c);
  EXPECT_EQ(run.series.corrections.size(), 1u);
  EXPECT_FALSE(run.bracket.has_value());
  const auto csv = render_series(run, c, "csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Series, CsvRoundTrips) {
  const auto c = vector_config();
  const auto run = compute_series(c);
  std::istringstream in(render_series(run, c, "csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,E_k,binding_sum");
  for (std::size_t k = 0; std::getline(in, line); ++k) {
    const auto a = line.find(','), b = line.rfind(',');
    EXPECT_EQ(std::stod(line.substr(a + 1, b - a - 1)), run.series.corrections[k]);
    EXPECT_EQ(std::stod(line.substr(b + 1)), run.sums.binding_sums[k]);
  }
}

TEST(Series, JsonSchema) {
  auto c = vector_config(6);
  c.with_oracle = true;
  const auto j = nlohmann::json::parse(render_series(compute_series(c), c, "json"));
  for (const char *key : {"config_echo", "corrections", "binding_sums", "bracket", "oracle"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["corrections"].size(), 7u);
  for (const char *key : {"estimate", "gap", "k_star"})
    EXPECT_TRUE(j["bracket"].contains(key)) << key;
  for (const char *key : {"binding", "nodes", "residual"})
    EXPECT_TRUE(j["oracle"].contains(key)) << key;
  EXPECT_EQ(j["oracle"]["nodes"], 1);
  EXPECT_EQ(j["config_echo"]["order"], 6);
}

TEST(Series, DeterministicBytes) {
  const auto c = vector_config();
  for (const char *fmt : {"table", "csv", "json"})
    EXPECT_EQ(render_series(compute_series(c), c, fmt), render_series(compute_series(c), c, fmt)) << fmt;
}

TEST(Series, EngineErrorsSurface) {
  const auto c = parse_config(std::string(R"({"potential": {"kind": "coulomb", "vector_strength": 1.5}})"));
  EXPECT_THROW(compute_series(c), SupercriticalCoupling);
}

TEST(Table, DefaultRun) {
  const auto t = run_table1();
  ASSERT_EQ(t.columns.size(), 6u);
  EXPECT_NEAR(t.columns[4].binding_sums[5], 9.063240, 2e-3);
  for (std::size_t c = 0; c < 6; ++c) {
    EXPECT_NEAR(t.columns[c].oracle.binding, reference::numerical[c], 1e-3) << t.columns[c].name;
    EXPECT_EQ(t.columns[c].oracle.node_count, 1);
  }
  const auto text = render_table1(t);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2 + 16 + 1);
  const auto j = table1_json(t);
  EXPECT_EQ(j["columns"].size(), 6u);
  EXPECT_EQ(j["columns"][0]["binding_sums"].size(), 16u);
}

TEST(Table, OrderThreePrefix) {
  Table1Options full, short_run;
  full.with_oracle = short_run.with_oracle = false;
  short_run.order = 3;
  const auto a = run_table1(full), b = run_table1(short_run);
  for (std::size_t c = 0; c < 6; ++c) {
    ASSERT_EQ(b.columns[c].binding_sums.size(), 4u);
    for (std::size_t k = 0; k < 4; ++k)
      EXPECT_EQ(b.columns[c].binding_sums[k], a.columns[c].binding_sums[k]);
  }
}

TEST(Table, SequentialEqualsConcurrent) {
  Table1Options seq, par;
  seq.with_oracle = par.with_oracle = false;
  seq.concurrent = false;
  EXPECT_EQ(render_table1(run_table1(seq), false), render_table1(run_table1(par), false));
}

TEST(Verify, CleanBuildPasses) {
  for (const auto &r : run_verify())
    EXPECT_TRUE(r.passed) << r.name << ": " << r.worst << " " << r.detail;
}

TEST(Verify, InjectedFaultFailsDualPath) {
  VerifyOptions v;
  v.inject_fault = true;
  bool dual_failed = false;
  for (const auto &r : run_verify(v))
    if (r.name == "dual path")
      dual_failed = !r.passed;
  EXPECT_TRUE(dual_failed);
}

TEST(Executable, ExitCodes) {
  std::string out;
  EXPECT_EQ(run_exe("series --config " CONFIG_DIR "/tungsten_vector_2p.json --format csv", &out), 0);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 17);
  EXPECT_EQ(run_exe("series --config /nonexistent.json"), 2);
  EXPECT_EQ(run_exe("series --config " + write_temp("bad_state.json", R"({"state": {"s": 3, "l": 0, "n_r": 1}})")), 2);
  EXPECT_EQ(run_exe("series --config " + write_temp("super.json", R"({"potential": {"kind": "coulomb",
                     "vector_strength": 1.5}})")),
            3);
  EXPECT_EQ(run_exe("verify"), 0);
  EXPECT_EQ(run_exe("verify --inject-fault"), 3);
}

TEST(Executable, OracleAndTable) {
  std::string out;
  ASSERT_EQ(run_exe("oracle --config " CONFIG_DIR "/tungsten_mixed_2s.json --tol 1e-11", &out), 0);
  const auto j = nlohmann::json::parse(out);
  EXPECT_NEAR(j["binding"].get<double>(), 11.881875, 1e-3);
  EXPECT_EQ(j["nodes"], 1);

  const std::string path = ::testing::TempDir() + "table1.json";
  ASSERT_EQ(run_exe("table1 --order 3 --out " + path, &out), 0);
  std::ifstream in(path);
  const auto t = nlohmann::json::parse(in);
  EXPECT_EQ(t["columns"][0]["binding_sums"].size(), 4u);
}

TEST(Executable, SampleConfigsRun) {
  for (const char *name : {"coulomb", "custom_series", "tungsten_mixed_2s", "tungsten_vector_2p", "yukawa_explicit"})
    EXPECT_EQ(run_exe(std::string("series --config " CONFIG_DIR "/") + name + ".json"), 0) << name;
}
