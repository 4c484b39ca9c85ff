// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "hsps/cli/commands.hpp"
#include "hsps/cli/config.hpp"
#include "hsps/cli/output.hpp"
#include "hsps/error.hpp"

namespace hsps::cli {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("hsps_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& s) const { return (path_ / s).string(); }

 private:
  fs::path path_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

//---------------------------------------------------------------------------//
// Config
//---------------------------------------------------------------------------//

TEST(Config, DefaultRoundTrip) {
  const RunConfig c;
  EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(Config, PerturbedRoundTrip) {
  RunConfig c;
  SimScenario& s = c.scenario;
  s.source.laser_power_mw = 17.3;
  s.source.gamma = 0.613;
  s.source.signal_excess_loss_db = 0.1234567;
  s.source.statistics = PairStatistics::poissonian;
  s.source.spurious_mode_weight = 0.5;
  s.sspd.dead_time_s = 37e-9;
  s.sspd.jitter_fwhm_ps = 61.0;
  s.apd1.dead_time_s = 7.5e-6;
  s.apd2.dark_prob_per_gate = 3e-6;
  s.tac2_offset_ps = -175.0;
  s.apd2_trigger_jitter = false;
  s.modes = {6, 3, 0.0031};
  s.duration_s = 0.25;
  s.seed = 123456789;
  s.block_size_pulses = 1'000'000;
  c.threads = 3;
  const std::string text = serialize_config(c);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(back, c) << text;
  EXPECT_EQ(serialize_config(back), text);
}

TEST(Config, MissingModesAreDerived) {
  const RunConfig c = parse_config("[laser]\npower_mw = 10\n");
  EXPECT_DOUBLE_EQ(c.scenario.source.laser_power_mw, 10.0);
  EXPECT_NEAR(c.scenario.modes.mu_per_mode, source_mean_pairs(c.scenario.source), 1e-15);
  EXPECT_EQ(c.scenario.modes.n_spectral, 8);
  EXPECT_EQ(c.scenario.modes.n_temporal, 4);
}

TEST(Config, BundledConfigMatchesDefaults) {
  const RunConfig c = load_config(fs::path(HSPS_SOURCE_DIR) / "configs" / "calibrated.ini");
  EXPECT_EQ(c.scenario.source, calibrated_scenario().source);
  EXPECT_EQ(c.scenario.modes, calibrated_scenario().modes);
  EXPECT_DOUBLE_EQ(c.scenario.duration_s, 10e-3);
}

TEST(Config, Durations) {
  EXPECT_DOUBLE_EQ(parse_duration("10ms"), 10e-3);
  EXPECT_DOUBLE_EQ(parse_duration("2s"), 2.0);
  EXPECT_DOUBLE_EQ(parse_duration("250us"), 250e-6);
  EXPECT_DOUBLE_EQ(parse_duration("500ns"), 500e-9);
  EXPECT_DOUBLE_EQ(parse_duration("0.1"), 0.1);
  EXPECT_THROW(parse_duration("ten ms"), DomainError);
  EXPECT_THROW(parse_duration("5 parsecs"), DomainError);
  EXPECT_THROW(parse_duration(""), DomainError);
  EXPECT_THROW(parse_duration("-1ms"), DomainError);
}

TEST(Config, ErrorsNameTheKey) {
  try {
    parse_config("[losses]\ngamma = 1.5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("losses.gamma"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("[lasers]\npower_mw = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[laser]\nwatts = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[laser]\npower_mw = lots\n"), ConfigError);
  EXPECT_THROW(parse_config("[laser\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/hsps.ini"), std::ios_base::failure);
}

//---------------------------------------------------------------------------//
// Exit codes
//---------------------------------------------------------------------------//

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, kConfigError);
  EXPECT_EQ(cli({"frobnicate"}).code, kConfigError);
  EXPECT_EQ(cli({"analytic", "--n-mean", "-1"}).code, kConfigError);
  EXPECT_EQ(cli({"analytic", "--eta-d", "1.5"}).code, kConfigError);
  EXPECT_EQ(cli({"sweep", "--grid", "0.002,0.001"}).code, kConfigError);
  EXPECT_EQ(cli({"--help"}).code, kOk);

  TempDir tmp;
  std::ofstream(tmp / "bad.ini") << "[losses]\ngamma = -0.1\n";
  const CliResult r = cli({"analytic", "-c", tmp / "bad.ini"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("losses.gamma"), std::string::npos) << r.err;
}

TEST(Cli, IoErrorsExitThree) {
  EXPECT_EQ(cli({"analytic", "-c", "/nonexistent/hsps.ini"}).code, kIoError);
  EXPECT_EQ(cli({"table", "--data", "/nonexistent/table.csv"}).code, kIoError);
  TempDir tmp;
  std::ofstream(tmp / "file") << "x";
  EXPECT_EQ(cli({"simulate", "--duration", "1us", "-o", tmp / "file"}).code, kIoError);
}

//---------------------------------------------------------------------------//
// Verbs
//---------------------------------------------------------------------------//

nlohmann::json analytic_json(std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"analytic", "--json"};
  args.insert(args.end(), extra.begin(), extra.end());
  const CliResult r = cli(args);
  EXPECT_EQ(r.code, kOk) << r.err;
  return nlohmann::json::parse(r.out);
}

TEST(Cli, AnalyticCalibratedPoint) {
  const auto j = analytic_json();
  EXPECT_NEAR(j["r_h_hz"]["value"].get<double>(), 2.1e6, 0.01 * 2.1e6);
  EXPECT_NEAR(j["p1"]["value"].get<double>(), 0.42, 0.01);
  EXPECT_NEAR(j["n_mean"]["value"].get<double>(), 0.005, 0.02 * 0.005);
  EXPECT_NEAR(j["g2"]["value"].get<double>(), single_mode_g2_theory(0.005, PairStatistics::thermal),
              1e-9);
}

TEST(Cli, AnalyticOverrides) {
  const auto zero = analytic_json({"--n-mean", "0"});
  EXPECT_EQ(zero["r_h_hz"]["value"].get<double>(), 0.0);
  EXPECT_TRUE(zero["p1"]["value"].is_null() || zero["p1"]["value"].get<double>() >= 0.0);

  const auto up = analytic_json({"--eta-d", "0.90", "--gamma", "0.80"});
  EXPECT_NEAR(up["r_h_hz"]["value"].get<double>(), 14.8e6, 0.01 * 14.8e6);

  const auto power = analytic_json({"--laser-power-mw", "10"});
  SourceConfig src;
  src.laser_power_mw = 10.0;
  EXPECT_NEAR(power["n_mean"]["value"].get<double>(), source_mean_pairs(src), 1e-12);
}

TEST(Cli, ProjectAndTable) {
  const CliResult p = cli({"project", "--json"});
  ASSERT_EQ(p.code, kOk) << p.err;
  const auto j = nlohmann::json::parse(p.out);
  EXPECT_NEAR(j["projected"]["r_h_hz"]["value"].get<double>(), 14.8e6, 0.01 * 14.8e6);

  const CliResult t = cli({"table"});
  ASSERT_EQ(t.code, kOk) << t.err;
  EXPECT_NE(t.out.find("| Nice "), std::string::npos);
  EXPECT_NE(t.out.find("| model, upgraded"), std::string::npos);
  EXPECT_NE(t.out.find("14.8 MHz"), std::string::npos);
}

TEST(Cli, SimulateIsDeterministic) {
  TempDir tmp;
  const std::vector<std::string> base{"simulate", "--duration", "2ms", "--seed", "5"};
  auto with_out = [&](const std::string& dir) {
    auto a = base;
    a.insert(a.end(), {"-o", tmp / dir});
    return a;
  };
  ASSERT_EQ(cli(with_out("a")).code, kOk);
  ASSERT_EQ(cli(with_out("b")).code, kOk);
  const std::string a = slurp(tmp.path() / "a" / "results.csv");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(tmp.path() / "b" / "results.csv"));

  const auto manifest = nlohmann::json::parse(slurp(tmp.path() / "a" / "manifest.json"));
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_TRUE(fs::exists(tmp.path() / "a" / "results.json"));
}

TEST(Cli, SimulateSingleModeAgreesWithTheory) {
  TempDir tmp;
  ASSERT_EQ(cli({"simulate", "--modes", "single", "--duration", "10ms", "-o", tmp / "s"}).code,
            kOk);
  const auto j = nlohmann::json::parse(slurp(tmp.path() / "s" / "results.json"));
  const double g2 = j["figures"]["g2"]["value"];
  const double sigma = j["figures"]["g2"]["sigma"];
  const double theory = j["g2_theory"];
  EXPECT_LE(std::abs(g2 - theory), 3 * sigma) << g2 << " +- " << sigma << " vs " << theory;
}

TEST(Cli, SinglePointSweepMatchesSimulate) {
  TempDir tmp;
  ASSERT_EQ(cli({"simulate", "--duration", "2ms", "--seed", "9", "-o", tmp / "sim"}).code, kOk);
  const CliResult r = cli({"sweep", "--grid", "0.005", "--duration", "2ms", "--seed", "9",
                           "-o", tmp / "sw", "--plots"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto sim = csv_rows(slurp(tmp.path() / "sim" / "results.csv"));
  const auto sw = csv_rows(slurp(tmp.path() / "sw" / "sweep.csv"));
  ASSERT_EQ(sim.size(), 2u);
  ASSERT_EQ(sw.size(), 2u);
  EXPECT_EQ(sim, sw);
  EXPECT_TRUE(fs::exists(tmp.path() / "sw" / "p1_vs_rh.svg"));
  EXPECT_TRUE(fs::exists(tmp.path() / "sw" / "g2_vs_rh.svg"));
}

TEST(Cli, SweepCsvCellsAreNumbersOrSentinels) {
  TempDir tmp;
  const CliResult r = cli({"sweep", "--points", "3", "--duration", "1ms", "-o", tmp / "sw"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = csv_rows(slurp(tmp.path() / "sw" / "sweep.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], csv_columns());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), csv_columns().size());
    for (std::size_t c = 0; c + 1 < rows[i].size(); ++c) {
      const std::string& cell = rows[i][c];
      if (cell == kUndefinedCell || cell == kUnboundedCell) continue;
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      EXPECT_EQ(used, cell.size()) << cell;
      EXPECT_TRUE(std::isfinite(v)) << cell;
    }
  }
}

TEST(Cli, OutputIgnoresGlobalLocale) {
  TempDir tmp;
  ASSERT_EQ(cli({"simulate", "--duration", "1ms", "-o", tmp / "c"}).code, kOk);
  // Comma decimals and digit grouping, as in many European locales.
  struct CommaDecimal : std::numpunct<char> {
    char do_decimal_point() const override { return ','; }
    char do_thousands_sep() const override { return '.'; }
    std::string do_grouping() const override { return "\3"; }
  };
  const std::locale saved =
      std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  const int code = cli({"simulate", "--duration", "1ms", "-o", tmp / "d"}).code;
  std::locale::global(saved);
  ASSERT_EQ(code, kOk);
  EXPECT_EQ(slurp(tmp.path() / "c" / "results.csv"), slurp(tmp.path() / "d" / "results.csv"));
}

//---------------------------------------------------------------------------//
// Output helpers
//---------------------------------------------------------------------------//

TEST(Output, UndefinedFiguresUseSentinel) {
  SweepRow row;
  row.set_value = 0.001;
  FiguresOfMerit f;
  f.r_h_hz = Figure::of(0.0, 0.0);
  f.p1 = Figure::undefined("no heralds");
  f.g2 = Figure::undefined("no S1");
  f.n_mean = Figure::of(0.0);
  row.figures = f;
  const auto rows = csv_rows(sweep_csv(std::span(&row, 1)));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][3], kUndefinedCell);
  EXPECT_EQ(rows[1][5], kUndefinedCell);

  row.figures.reset();
  row.error = "bad, point";
  const std::string csv = sweep_csv(std::span(&row, 1));
  EXPECT_NE(csv.find("\"bad, point\""), std::string::npos);
}

TEST(Output, SvgExtentCoversErrorBars) {
  const std::vector<PlotPoint> pts{{1e5, 0.40, 0.02}, {1e6, 0.43, 0.01}, {2e6, 0.42, 0.03}};
  const std::string svg = svg_plot(pts, "R_H (Hz)", "P1");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  auto attr = [&](const std::string& name) {
    const auto pos = svg.find(name + "=\"");
    EXPECT_NE(pos, std::string::npos) << name;
    return std::stod(svg.substr(pos + name.size() + 2));
  };
  EXPECT_LE(attr("data-x-min"), 1e5);
  EXPECT_GE(attr("data-x-max"), 2e6);
  EXPECT_LE(attr("data-y-min"), 0.38);
  EXPECT_GE(attr("data-y-max"), 0.45 - 1e-12);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Output, FormatDoubleIsShortestRoundTrip) {
  for (double v : {0.1, 2.1e6, 1.0 / 3.0, 1e-300, 123456789.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.42), "0.42");
}

}  // namespace
}  // namespace hsps::cli
