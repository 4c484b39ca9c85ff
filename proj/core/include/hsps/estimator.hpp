// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "hsps/model.hpp"
#include "hsps/simkernel.hpp"

namespace hsps {

/// Constants that turn raw counts into figures of merit.
struct EstimationConfig {
  double eta_1 = 0.25;
  double eta_2 = 0.25;
  double eta_d = 0.17;
  double sspd_dead_time_s = 0.0;
  double apd1_dead_time_s = 0.0;
  double apd2_dead_time_s = 0.0;
  double rep_rate_hz = 10e9;
  double gamma = 0.60;
  double t_h = 1.0;
  //! S2/S1 above this emits a warning (the estimators assume S2 << S1).
  double s2_s1_warning_ratio = 0.05;
};

void validate(const EstimationConfig& cfg);

//! Estimation constants matching a simulated scenario.
EstimationConfig estimation_config_for(const SimScenario& s);

/*!
 * Figures of merit from counting totals.
 *
 * Rates are counts over the run duration, dead-time corrected with their
 * own detector. APD1 is gated only by recorded heralds and APD2 only by
 * APD1 clicks, so S1 is also scaled by the SSPD live-fraction correction and
 * S2 by both the SSPD and APD1 corrections. P1, g2 and <n> then follow from the
 * closed forms. One-sigma errors propagate independent Poisson count errors
 * to first order; a zero count contributes the one-count bound.
 */
FiguresOfMerit estimate(const CountingTotals& totals, const EstimationConfig& cfg);

struct TheoryOverlay {
  double g2_theory = 0.0;
  //! measured minus theory; undefined when g2 or <n> is
  Figure residual;
};

//! Single-mode g2 theory evaluated at the estimated <n>.
TheoryOverlay theory_overlay(const FiguresOfMerit& figures, PairStatistics statistics);

}  // namespace hsps
