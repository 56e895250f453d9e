#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gpgoodwin/data_io.hpp"

namespace fs = std::filesystem;
namespace data = gpgoodwin::data;
using Json = nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gpgoodwin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Outcome run(const std::string& args, const std::string& env = "") const {
    const auto out = path("stdout.txt");
    const auto err = path("stderr.txt");
    const std::string cmd = env + " '" + std::string(GPGOODWIN_CLI_PATH) + "' " + args + " > '" +
                            out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  Json json(const std::string& name) const { return Json::parse(slurp(path(name))); }

  data::NumericTable csv(const std::string& name) const {
    return data::load_numeric_csv(path(name).string());
  }

  std::string p(const std::string& name) const { return "'" + path(name).string() + "'"; }

 private:
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, Table1RoundTripsThroughLoader) {
  const auto r = run("table1 -o " + p("t.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(data::load_table_csv(path("t.csv").string()), data::load_table1());
  ASSERT_EQ(run("table1 --interpolate -o " + p("ti.csv")).code, 0);
  const auto filled = data::load_table_csv(path("ti.csv").string());
  EXPECT_TRUE(filled[10].has_gpd());
  EXPECT_TRUE(filled[10].interpolated);
}

TEST_F(Cli, EvaluateRowsAndSkips) {
  const auto r = run("evaluate -o " + p("e.csv") + " --report " + p("e.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("skipping 1991"), std::string::npos);
  const auto t = csv("e.csv");
  ASSERT_EQ(t.rows.size(), 29u);
  int evaluated = 0;
  for (const auto& row : t.rows) evaluated += static_cast<int>(*row[t.column("evaluated")]);
  EXPECT_EQ(evaluated, 26);
  const auto& first = t.rows[0];
  EXPECT_LT(std::abs(*first[t.column("u_gap")]), 0.07);
  const auto& y1991 = t.rows[10];
  EXPECT_EQ(*y1991[t.column("year")], 1991.0);
  EXPECT_EQ(*y1991[t.column("evaluated")], 0.0);
  EXPECT_FALSE(y1991[t.column("u")].has_value());
  const auto j = json("e.json");
  EXPECT_EQ(j["evaluated"], 26);
  EXPECT_EQ(j["skipped"], Json::array({1991, 1994, 2000}));
}

TEST_F(Cli, LogLevelFromEnvironment) {
  const auto quiet = run("evaluate", "GPGOODWIN_LOG=off");
  ASSERT_EQ(quiet.code, 0);
  EXPECT_TRUE(quiet.err.empty()) << quiet.err;
  const auto chatty = run("evaluate", "GPGOODWIN_LOG=info");
  EXPECT_NE(chatty.err.find("evaluated 26 rows"), std::string::npos);
}

TEST_F(Cli, SimulateCenterIsStationary) {
  const auto r = run("simulate --a1 1 --a2 1 --b1 0.02 --b2 0.02 --u0 50 --v0 50 --t-end 5 -o " +
                     p("c.csv") + " --report " + p("c.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("c.json");
  EXPECT_TRUE(j["orbit"]["stationary"].get<bool>());
  EXPECT_TRUE(j["orbit"]["period"].is_null());
  const auto t = csv("c.csv");
  for (const auto& row : t.rows) EXPECT_NEAR(*row[1], 50.0, 1e-12);
}

TEST_F(Cli, SimulateSmallOrbitPeriod) {
  const auto r = run("simulate --a1 1 --a2 1 --b1 0.02 --b2 0.02 --t-end 70 -o " + p("o.csv") +
                     " --report " + p("o.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("o.json");
  const double formula = j["period_formula"];
  EXPECT_NEAR(formula, 2.0 * M_PI, 1e-12);
  EXPECT_NEAR(j["orbit"]["period"].get<double>(), formula, 0.005 * formula);
  EXPECT_LT(j["orbit"]["conserved_drift"].get<double>(), 1e-8);
  const auto t = csv("o.csv");
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "u", "v"}));
  EXPECT_EQ(t.rows.size(), 7001u);
}

TEST_F(Cli, SimulateFittedSignsUpsetTextbookConditions) {
  const auto r = run(
      "simulate --a1 -0.17 --a2 -0.52 --b1 -0.0019 --b2 -0.006 --t-end 1 -o /dev/null --report " +
      p("f.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto c = json("f.json")["conditions"];
  EXPECT_FALSE(c["textbook_holds"].get<bool>());
  for (const auto& e : c["empirical"]) {
    const std::string label = e["condition"];
    if (label == "c < 0" || label == "h < 0" || label == "(a+d) < 0") {
      EXPECT_EQ(e["verdict"], "holds") << label;
    }
  }
}

TEST_F(Cli, SimulateDomainExitIsNumericalFailure) {
  const auto r = run("simulate --model dhmp --a1 0.1 --a2 -1 --b1 0 --b2 0.5 --u0 50 --v0 90 "
                     "--t-end 50 -o " + p("d.csv") + " --report " + p("d.json"));
  EXPECT_EQ(r.code, 3);
  const auto j = json("d.json");
  EXPECT_TRUE(j["orbit"]["truncated"].get<bool>());
  EXPECT_LT(csv("d.csv").rows.size(), 50001u);
}

TEST_F(Cli, SimulateRawQuintuple) {
  const auto r = run("simulate --raw 0.02,0.03,2.5,0.01,0.4 --t-end 1 -o /dev/null --report " +
                     p("r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("r.json");
  EXPECT_NEAR(j["constants"]["b2"].get<double>(), 0.4, 1e-15);
  EXPECT_TRUE(j["conditions"]["textbook_holds"].get<bool>());
  EXPECT_EQ(run("simulate --raw 1,2 -o /dev/null").code, 2);
  EXPECT_EQ(run("simulate --a1 1 -o /dev/null").code, 2);
}

TEST_F(Cli, EstimateReportAndExports) {
  const auto r = run("estimate -o " + p("est.json") + " --export-dir " + p("exp"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json("est.json");
  EXPECT_EQ(j["goodwin"]["years"].size(), 27u);
  EXPECT_TRUE(j["goodwin"]["u_fit"]["coefficients"].contains("A1"));
  EXPECT_TRUE(j["dhmp"]["u_fit"]["coefficients"].contains("delta"));
  EXPECT_EQ(j["dhmp"]["u_bar"], 95.0);
  EXPECT_EQ(j["derivatives"]["rows"][0]["year"], 1982);
  EXPECT_NEAR(j["derivatives"]["rows"][0]["du"].get<double>(), -1.10, 1e-12);
  EXPECT_EQ(j["centroids"].size(), 2u);
  const auto phase = data::load_numeric_csv((path("exp") / "phase.csv").string());
  ASSERT_EQ(phase.rows.size(), 29u);
  for (std::size_t i = 0; i < 29; ++i) EXPECT_EQ(*phase.rows[i][0], static_cast<double>(i + 1));
  EXPECT_EQ(data::load_numeric_csv((path("exp") / "tuv.csv").string()).rows.size(), 29u);
  EXPECT_EQ(data::load_numeric_csv((path("exp") / "uv_series.csv").string()).columns[3],
            "interpolated");
}

TEST_F(Cli, EstimateOptions) {
  ASSERT_EQ(run("estimate --exclude-interpolated --direction reversed -o " + p("x.json")).code, 0);
  const auto j = json("x.json");
  EXPECT_EQ(j["goodwin"]["years"].size(), 24u);
  EXPECT_EQ(j["direction"], "reversed");
  EXPECT_EQ(run("estimate --u-bar 80").code, 2);
  EXPECT_EQ(run("estimate --direction sideways").code, 2);
  EXPECT_EQ(run("estimate --segments 1981-1994,1990-2000").code, 2);
}

TEST_F(Cli, ConfigFileDefaultsAndOverride) {
  std::ofstream(path("cfg.json")) << R"({"u_bar": 96, "exclude_interpolated": true})";
  ASSERT_EQ(run("--config " + p("cfg.json") + " estimate -o " + p("a.json")).code, 0);
  EXPECT_EQ(json("a.json")["dhmp"]["u_bar"], 96.0);
  EXPECT_TRUE(json("a.json")["exclude_interpolated"].get<bool>());
  ASSERT_EQ(run("--config " + p("cfg.json") + " estimate --u-bar 97 -o " + p("b.json")).code, 0);
  EXPECT_EQ(json("b.json")["dhmp"]["u_bar"], 97.0);
  std::ofstream(path("bad.json")) << R"({"colour": "blue"})";
  EXPECT_EQ(run("--config " + p("bad.json") + " table1").code, 2);
}

TEST_F(Cli, SampleIsDeterministic) {
  ASSERT_EQ(run("sample -n 5000 --seed 9 -o " + p("a.csv")).code, 0);
  ASSERT_EQ(run("sample -n 5000 --seed 9 -o " + p("b.csv")).code, 0);
  ASSERT_EQ(run("sample -n 5000 --seed 10 -o " + p("c.csv")).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
  EXPECT_EQ(data::load_income_csv(path("a.csv").string()).raw.size(), 5000u);
}

TEST_F(Cli, SampleWithNominalScaleRestoresNormalized) {
  ASSERT_EQ(run("sample -n 1000 --seed 2 --nominal-scale 500 -o " + p("n.csv")).code, 0);
  ASSERT_EQ(run("sample -n 1000 --seed 2 -o " + p("u.csv")).code, 0);
  const auto nominal = data::load_income_csv(path("n.csv").string());
  const auto plain = data::load_income_csv(path("u.csv").string());
  ASSERT_EQ(*nominal.normalization_constant, 500.0);
  for (std::size_t i = 0; i < plain.raw.size(); ++i) {
    EXPECT_NEAR(nominal.normalized[i], plain.raw[i], 1e-12 * plain.raw[i]);
  }
}

TEST_F(Cli, FitGpdMillionDraws) {
  ASSERT_EQ(run("sample -n 1000000 --seed 31 -o " + p("inc.csv")).code, 0);
  const auto r = run("fit-gpd -i " + p("inc.csv") + " -o " + p("f1.json") + " --curve " + p("c.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto f = json("f1.json")["fit"];
  EXPECT_TRUE(f["converged"].get<bool>());
  EXPECT_NEAR(f["slope"].get<double>(), 0.34, 0.05 * 0.34);
  EXPECT_NEAR(f["alpha"].get<double>(), 2.8, 0.05 * 2.8);
  EXPECT_NEAR(f["threshold"].get<double>(), 7.5, 0.10 * 7.5);
  const auto curve = csv("c.csv");
  EXPECT_EQ(curve.columns, (std::vector<std::string>{"x", "empirical_F", "fitted_F"}));
  EXPECT_GT(curve.rows.size(), 100u);
  ASSERT_EQ(run("fit-gpd -i " + p("inc.csv") + " -o " + p("f2.json")).code, 0);
  EXPECT_EQ(slurp(path("f1.json")), slurp(path("f2.json")));
}

TEST_F(Cli, FitGpdFailureCodes) {
  std::ofstream(path("empty.csv")).close();
  const auto empty = run("fit-gpd -i " + p("empty.csv"));
  EXPECT_EQ(empty.code, 2);
  EXPECT_EQ(run("fit-gpd -i " + p("missing.csv")).code, 2);
  ASSERT_EQ(run("sample -n 20000 --seed 3 -o " + p("s.csv")).code, 0);
  const auto tight = run("fit-gpd -i " + p("s.csv") + " --a-bound 1e-9 -o " + p("t.json"));
  EXPECT_EQ(tight.code, 3);
  EXPECT_FALSE(json("t.json")["fit"]["converged"].get<bool>());
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("simulate --model lorenz").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}
