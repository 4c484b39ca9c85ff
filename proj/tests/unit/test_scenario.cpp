// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "hsps/error.hpp"
#include "hsps/model.hpp"
#include "hsps/scenario.hpp"

namespace hsps {
namespace {

SweepSpec short_sweep(std::vector<double> grid) {
  SweepSpec spec;
  spec.base = calibrated_scenario();
  spec.grid = std::move(grid);
  spec.duration_s = 1e-3;
  return spec;
}

TEST(Sweep, ValidationFields) {
  auto field_of = [](const SweepSpec& s) {
    try {
      validate(s);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string();
  };
  EXPECT_EQ(field_of(short_sweep({})), "sweep.grid");
  EXPECT_EQ(field_of(short_sweep({0.002, 0.001})), "sweep.grid");
  EXPECT_EQ(field_of(short_sweep({0.001, 0.001})), "sweep.grid");
  EXPECT_EQ(field_of(short_sweep({-0.001})), "sweep.grid");
  SweepSpec s = short_sweep({0.001, 0.002});
  s.seeds = {1};
  EXPECT_EQ(field_of(s), "sweep.seeds");
  s = short_sweep({0.001});
  s.duration_s = 0.0;
  EXPECT_EQ(field_of(s), "sweep.duration");
  EXPECT_EQ(field_of(short_sweep({0.001, 0.002})), "");
}

TEST(Sweep, VariableNames) {
  for (auto v : {SweepVariable::n_mean, SweepVariable::laser_power_mw}) {
    EXPECT_EQ(parse_sweep_variable(to_string(v)), v);
  }
  EXPECT_THROW(parse_sweep_variable("temperature"), ConfigError);
}

TEST(Sweep, PointScenario) {
  SweepSpec spec = short_sweep({0.001, 0.004});
  spec.base.seed = 10;
  const SimScenario p = sweep_point(spec, 1);
  EXPECT_DOUBLE_EQ(p.modes.mu_per_mode, 0.004);
  EXPECT_EQ(p.seed, 11u);
  EXPECT_DOUBLE_EQ(p.duration_s, 1e-3);
  spec.seeds = {5, 9};
  EXPECT_EQ(sweep_point(spec, 1).seed, 9u);

  spec.variable = SweepVariable::laser_power_mw;
  spec.grid = {10.0, 20.0};
  const SimScenario q = sweep_point(spec, 1);
  EXPECT_DOUBLE_EQ(q.source.laser_power_mw, 20.0);
  EXPECT_NEAR(q.modes.mu_per_mode, source_mean_pairs(q.source), 1e-15);
}

TEST(Sweep, SinglePointEqualsPlainRun) {
  SweepSpec spec = short_sweep({0.005});
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].error.empty());
  const SimScenario s = sweep_point(spec, 0);
  EXPECT_EQ(rows[0].totals, run(s));
  ASSERT_TRUE(rows[0].figures);
  EXPECT_EQ(*rows[0].figures->g2.value, *estimate(run(s), estimation_config_for(s)).g2.value);
  EXPECT_NEAR(rows[0].g2_theory, single_mode_g2_theory(*rows[0].figures->n_mean.value,
                                                       PairStatistics::thermal),
              1e-15);
}

TEST(Sweep, RowsKeepGridOrderAndRiseInRate) {
  SweepSpec spec = short_sweep({0.0005, 0.001, 0.002, 0.004});
  spec.threads = 2;
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].set_value, spec.grid[i]);
    ASSERT_TRUE(rows[i].figures);
    if (i > 0) {
      EXPECT_GT(*rows[i].figures->r_h_hz.value, *rows[i - 1].figures->r_h_hz.value);
    }
  }
}

TEST(Sweep, FailingPointKeepsItsRow) {
  SweepSpec spec = short_sweep({0.001, 0.002});
  spec.base.sspd.efficiency = 1.5;  // invalid at every point
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.error.empty());
    EXPECT_FALSE(r.figures);
  }
}

TEST(Sweep, DefaultGridSpansHeraldingRates) {
  const SimScenario base = calibrated_scenario();
  const auto grid = default_sweep_grid(base, SweepVariable::n_mean);
  ASSERT_EQ(grid.size(), 8u);
  EXPECT_NEAR(grid.back(), 0.005, 1e-4);
  const double f = base.source.rep_rate_hz, g = base.source.gamma;
  const double th = base.source.signal_transmission(), eta = base.sspd.efficiency;
  EXPECT_NEAR(heralding_rate(f, grid.front(), g, th, eta), 50e3, 1.0);
  EXPECT_NEAR(heralding_rate(f, grid.back(), g, th, eta), 2.1e6, 1e3);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    EXPECT_NEAR(grid[i] / grid[i - 1], grid[1] / grid[0], 1e-9);
  }
  const auto power = default_sweep_grid(base, SweepVariable::laser_power_mw);
  SimScenario top = base;
  top.source.laser_power_mw = power.back();
  EXPECT_NEAR(source_mean_pairs(top.source), grid.back(), 1e-9);
}

FiguresOfMerit nice_figures() {
  FiguresOfMerit f;
  f.r_h_hz = Figure::of(2.1e6, 1e3);
  f.s1_hz = Figure::of(110250);
  f.s2_hz = Figure::of(133.1);
  f.p1 = Figure::of(0.42, 0.01);
  f.g2 = Figure::of(0.023, 0.002);
  f.n_mean = Figure::of(0.005);
  return f;
}

TEST(ProjectUpgrade, IdentityLeavesFiguresUnchanged) {
  const FiguresOfMerit f = nice_figures();
  const FiguresOfMerit p = project_upgrade(f, 0.17, 0.60, 0.17, 0.60);
  EXPECT_DOUBLE_EQ(*p.r_h_hz.value, *f.r_h_hz.value);
  EXPECT_DOUBLE_EQ(*p.p1.value, *f.p1.value);
  EXPECT_DOUBLE_EQ(*p.g2.value, *f.g2.value);
  EXPECT_DOUBLE_EQ(*p.n_mean.value, *f.n_mean.value);
  EXPECT_DOUBLE_EQ(*p.s1_hz.value, *f.s1_hz.value);
  EXPECT_DOUBLE_EQ(*p.s2_hz.value, *f.s2_hz.value);
}

TEST(ProjectUpgrade, DetectorAndCoupling) {
  const FiguresOfMerit p = project_upgrade(nice_figures(), 0.17, 0.60, 0.90, 0.80);
  const double oracle = 2.1e6 * (0.90 / 0.17) * (0.80 / 0.60);
  EXPECT_NEAR(*p.r_h_hz.value, oracle, 1e-6);
  EXPECT_NEAR(*p.r_h_hz.value, 14.8e6, 0.01 * 14.8e6);
  EXPECT_NEAR(*p.r_h_hz.value, 15e6, 0.02 * 15e6);
  EXPECT_NEAR(*p.p1.value, 0.56, 1e-12);
  EXPECT_DOUBLE_EQ(*p.g2.value, 0.023);
  EXPECT_DOUBLE_EQ(*p.n_mean.value, 0.005);
}

TEST(ProjectUpgrade, DetectorOnly) {
  const FiguresOfMerit p = project_upgrade(nice_figures(), 0.17, 0.60, 0.90, 0.60);
  EXPECT_NEAR(*p.r_h_hz.value / 2.1e6, 0.90 / 0.17, 1e-12);
  EXPECT_NEAR(*p.r_h_hz.value / 2.1e6, 5.29, 0.005);
  EXPECT_DOUBLE_EQ(*p.p1.value, 0.42);
}

TEST(ProjectUpgrade, P1IsCapped) {
  const FiguresOfMerit p = project_upgrade(nice_figures(), 0.17, 0.30, 0.17, 0.90);
  EXPECT_DOUBLE_EQ(*p.p1.value, 1.0);
}

TEST(ParseCell, Forms) {
  TableCell c = parse_cell("0.18^a");
  EXPECT_EQ(c.text, "0.18^a");
  EXPECT_DOUBLE_EQ(*c.value, 0.18);
  EXPECT_EQ(c.footnote, "a");
  EXPECT_TRUE(c.qualifier.empty());

  c = parse_cell("~10 kHz^b");
  EXPECT_DOUBLE_EQ(*c.value, 10e3);
  EXPECT_EQ(c.qualifier, "~");
  EXPECT_EQ(c.footnote, "b");

  c = parse_cell("<0.3");
  EXPECT_DOUBLE_EQ(*c.value, 0.3);
  EXPECT_EQ(c.qualifier, "<");

  c = parse_cell("<~0.020");
  EXPECT_DOUBLE_EQ(*c.value, 0.020);
  EXPECT_EQ(c.qualifier, "<~");

  EXPECT_DOUBLE_EQ(*parse_cell("2.1 MHz").value, 2.1e6);
  EXPECT_DOUBLE_EQ(*parse_cell("6 Hz").value, 6.0);
  EXPECT_FALSE(parse_cell("-").value);
  EXPECT_THROW(parse_cell("n/a"), DomainError);
}

TEST(LiteratureTable, BundledRows) {
  const auto rows = load_literature_table();
  ASSERT_EQ(rows.size(), 7u);
  const TableRow& nice = rows[0];
  EXPECT_EQ(nice.name, "Nice");
  EXPECT_DOUBLE_EQ(*nice.p1.value, 0.42);
  EXPECT_DOUBLE_EQ(*nice.eta_d.value, 0.17);
  EXPECT_DOUBLE_EQ(*nice.r_h.value, 2.1e6);
  EXPECT_DOUBLE_EQ(*nice.n_mean.value, 0.005);
  EXPECT_DOUBLE_EQ(*nice.g2.value, 0.023);

  const TableRow& geneva = rows[1];
  EXPECT_EQ(geneva.name, "Geneva");
  EXPECT_DOUBLE_EQ(*geneva.p1.value, 0.45);
  EXPECT_DOUBLE_EQ(*geneva.eta_d.value, 0.50);
  EXPECT_DOUBLE_EQ(*geneva.r_h.value, 4.4e6);
  EXPECT_DOUBLE_EQ(*geneva.n_mean.value, 0.1);
  EXPECT_DOUBLE_EQ(*geneva.g2.value, 0.18);
  EXPECT_EQ(geneva.g2.footnote, "a");

  EXPECT_FALSE(rows[4].g2.value);
  EXPECT_EQ(rows[5].p1.qualifier, "<");
}

TEST(LiteratureTable, MalformedFile) {
  const auto path = std::filesystem::temp_directory_path() / "hsps_bad_table.csv";
  {
    std::ofstream out(path);
    out << "name,p1,eta_d,r_h,n_mean,g2\nNice,0.42,0.17\n";
  }
  EXPECT_THROW(load_literature_table(path), ConfigError);
  std::filesystem::remove(path);
  EXPECT_ANY_THROW(load_literature_table(path));
}

TEST(ComparisonTable, EmptyInputIsHeaderOnly) {
  const std::string t = comparison_table({});
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 2);
  EXPECT_NE(t.find("P1"), std::string::npos);
  EXPECT_NE(t.find("g2(0)"), std::string::npos);
}

TEST(ComparisonTable, RowsAndMissingFields) {
  std::vector<TableRow> rows = load_literature_table();
  FiguresOfMerit f = nice_figures();
  f.g2 = Figure::undefined("no S1");
  rows.push_back(table_row("model", f, 0.17));
  const std::string t = comparison_table(rows);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 2 + 8);
  EXPECT_NE(t.find("| Geneva"), std::string::npos);
  EXPECT_NE(t.find("0.18^a"), std::string::npos);
  const auto model = t.substr(t.find("| model"));
  EXPECT_NE(model.find("2.1 MHz"), std::string::npos);
  EXPECT_NE(model.find("| -"), std::string::npos);
}

TEST(FormatRate, Units) {
  EXPECT_EQ(format_rate(2.1e6), "2.1 MHz");
  EXPECT_EQ(format_rate(14.82e6), "14.8 MHz");
  EXPECT_EQ(format_rate(105e3), "105 kHz");
  EXPECT_EQ(format_rate(6.0), "6 Hz");
}

}  // namespace
}  // namespace hsps
