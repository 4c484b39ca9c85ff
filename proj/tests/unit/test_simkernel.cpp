// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "hsps/error.hpp"
#include "hsps/estimator.hpp"
#include "hsps/simkernel.hpp"

namespace hsps {
namespace {

bool within_sigmas(double a, double b, double sigma, double k = 3.0) {
  return std::abs(a - b) <= k * sigma;
}

TEST(Scenario, CalibratedDefaults) {
  const SimScenario s = calibrated_scenario();
  EXPECT_EQ(s.modes, (ModeStructure{8, 4, 0.005}));
  EXPECT_NO_THROW(validate(s));
  EXPECT_EQ(s.total_pulses(), 100'000'000u);
  EXPECT_EQ(s.block_count(), 10u);
}

TEST(Scenario, ValidationReportsFields) {
  SimScenario s = calibrated_scenario();
  s.sspd.mode = DetectorMode::triggered;
  s.sspd.gate_window_ps = 100;
  s.sspd.dark_rate_hz = 0;
  s.sspd.dark_prob_per_gate = 1e-5;
  EXPECT_THROW(validate(s), ConfigError);
  s = calibrated_scenario();
  s.duration_s = 0.0;
  try {
    validate(s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "run.duration");
  }
  s = calibrated_scenario();
  s.tac1_window_ps = -1;
  EXPECT_THROW(run(s), ConfigError);
}

TEST(Run, DeadDetectorsCountNothing) {
  SimScenario s = calibrated_scenario();
  s.duration_s = 1e-3;
  for (DetectorModel* d : {&s.sspd, &s.apd1, &s.apd2}) {
    d->efficiency = 0.0;
    d->dark_rate_hz = 0.0;
    d->dark_prob_per_gate = 0.0;
  }
  const CountingTotals t = run(s);
  EXPECT_EQ(t.pulses, 10'000'000u);
  EXPECT_EQ(t.heralds, 0u);
  EXPECT_EQ(t.s1_counts, 0u);
  EXPECT_EQ(t.s2_counts, 0u);
}

TEST(Run, LosslessThermalHeraldProbability) {
  SimScenario s = single_mode_scenario(0.005, PairStatistics::thermal, 1.0);
  s.duration_s = 1e-3;
  const CountingTotals t = run(s);
  const double p = 0.005 / 1.005;
  const double n = static_cast<double>(t.pulses);
  EXPECT_TRUE(within_sigmas(t.heralds / n, p, std::sqrt(p * (1 - p) / n)))
      << t.heralds / n << " vs " << p;
}

TEST(Run, CalibratedPointRatesAndEfficiency) {
  SimScenario s = calibrated_scenario();
  const CountingTotals t = run(s);
  // Raw heralds carry the SSPD dead time; the estimator removes it.
  const double raw = t.heralds / t.duration_s;
  const double expected_raw = dead_time_apply(2.1e6, s.sspd.dead_time_s);
  EXPECT_TRUE(within_sigmas(raw, expected_raw, std::sqrt(double(t.heralds)) / t.duration_s))
      << raw;
  const FiguresOfMerit f = estimate(t, estimation_config_for(s));
  EXPECT_TRUE(within_sigmas(*f.r_h_hz.value, 2.1e6, f.r_h_hz.sigma)) << *f.r_h_hz.value;
  EXPECT_TRUE(within_sigmas(*f.p1.value, 0.42, f.p1.sigma)) << *f.p1.value;
}

TEST(Run, OriginsAndBusyTimesAreConsistent) {
  SimScenario s = calibrated_scenario();
  s.duration_s = 5e-3;
  s.source.spurious_mode_weight = 1.0;
  const CountingTotals t = run(s);
  EXPECT_EQ(t.herald_origin.total(), t.heralds);
  EXPECT_EQ(t.s1_origin.total(), t.s1_counts);
  EXPECT_EQ(t.s2_origin.total(), t.s2_counts);
  EXPECT_LE(t.s2_counts, t.s1_counts);
  EXPECT_LE(t.s1_counts, t.heralds);
  EXPECT_LE(t.apd1_gates, t.heralds);
  EXPECT_LE(t.sspd_busy_s, t.duration_s);
  EXPECT_LE(t.apd1_busy_s, t.duration_s);
  EXPECT_LE(t.apd2_busy_s, t.duration_s);
  EXPECT_LE(t.heralds / t.duration_s, 1.0 / s.sspd.dead_time_s);
  EXPECT_LE(t.s1_counts / t.duration_s, 1.0 / s.apd1.dead_time_s);
  EXPECT_GT(t.s1_origin.uncorrelated, 0u);
}

TEST(Run, DeterministicAcrossThreadCounts) {
  SimScenario s = calibrated_scenario();
  s.duration_s = 4e-3;
  s.block_size_pulses = 5'000'000;
  const CountingTotals a = run(s, 1);
  EXPECT_EQ(a, run(s, 1));
  EXPECT_EQ(a, run(s, 3));
  s.seed = 2;
  EXPECT_NE(a, run(s, 1));
}

TEST(Run, BlockPartitionIsStatisticallyNeutral) {
  SimScenario s = calibrated_scenario();
  s.duration_s = 20e-3;
  s.block_size_pulses = s.total_pulses();
  const CountingTotals one = run(s);
  s.block_size_pulses = s.total_pulses() / 8;
  const CountingTotals eight = run(s);
  EXPECT_EQ(one.pulses, eight.pulses);
  auto close = [](std::uint64_t a, std::uint64_t b) {
    return within_sigmas(double(a), double(b), std::sqrt(double(a + b)));
  };
  EXPECT_TRUE(close(one.heralds, eight.heralds)) << one.heralds << " " << eight.heralds;
  EXPECT_TRUE(close(one.s1_counts, eight.s1_counts)) << one.s1_counts << " " << eight.s1_counts;
  EXPECT_TRUE(close(one.s2_counts, eight.s2_counts));
}

TEST(Run, CountsIncreaseWithMu) {
  SimScenario lo = single_mode_scenario(0.005, PairStatistics::thermal);
  SimScenario hi = single_mode_scenario(0.01, PairStatistics::thermal);
  lo.duration_s = hi.duration_s = 5e-3;
  const CountingTotals a = run(lo), b = run(hi);
  auto grows = [](std::uint64_t x, std::uint64_t y) {
    return double(y) - double(x) > 3.0 * std::sqrt(double(x + y));
  };
  EXPECT_TRUE(grows(a.heralds, b.heralds));
  EXPECT_TRUE(grows(a.s1_counts, b.s1_counts));
  EXPECT_TRUE(grows(a.s2_counts, b.s2_counts)) << a.s2_counts << " " << b.s2_counts;
}

TEST(Run, ClickRecordsMatchCounters) {
  SimScenario s = calibrated_scenario();
  s.duration_s = 1e-3;
  std::vector<ClickRecord> clicks;
  const CountingTotals t = run_block(s, 0, &clicks);
  std::uint64_t sspd = 0, apd1 = 0, apd2 = 0;
  for (const auto& c : clicks) {
    sspd += c.detector == DetectorId::sspd;
    apd1 += c.detector == DetectorId::apd1;
    apd2 += c.detector == DetectorId::apd2;
  }
  EXPECT_EQ(sspd, t.heralds);
  EXPECT_EQ(apd1, t.s1_counts);
  EXPECT_EQ(apd2, t.s2_counts);
}

TEST(Invariants, InconsistentTotalsAreRejected) {
  CountingTotals t;
  t.duration_s = 1.0;
  t.heralds = 1;
  t.herald_origin.correlated = 1;
  t.s1_counts = 2;
  t.s1_origin.correlated = 2;
  EXPECT_THROW(check_invariants(t), InvariantError);
  t.s1_counts = 1;
  t.s1_origin.correlated = 1;
  EXPECT_NO_THROW(check_invariants(t));
  t.sspd_busy_s = 2.0;
  EXPECT_THROW(check_invariants(t), InvariantError);
}

class SingleModeEquivalence
    : public ::testing::TestWithParam<std::tuple<double, PairStatistics>> {};

TEST_P(SingleModeEquivalence, G2MatchesTheory) {
  const auto [mu, stats] = GetParam();
  SimScenario s = single_mode_scenario(mu, stats);
  s.seed = 17;
  const CountingTotals t = run(s);
  const FiguresOfMerit f = estimate(t, estimation_config_for(s));
  ASSERT_TRUE(f.g2.defined());
  const double theory = single_mode_g2_theory(mu, stats);
  EXPECT_TRUE(within_sigmas(*f.g2.value, theory, f.g2.sigma))
      << *f.g2.value << " +- " << f.g2.sigma << " vs " << theory;
}

INSTANTIATE_TEST_SUITE_P(
    Mu, SingleModeEquivalence,
    ::testing::Combine(::testing::Values(0.001, 0.005, 0.02),
                       ::testing::Values(PairStatistics::thermal, PairStatistics::poissonian)));

}  // namespace
}  // namespace hsps
