// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/estimator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hsps/error.hpp"

namespace hsps {
namespace {

using Counts = std::array<double, 3>;  // heralds, s1, s2
using FigureFn = std::function<double(const Counts&)>;

struct Rates {
  double r_h, s1, s2;
};

Rates corrected_rates(const Counts& n, double duration, const EstimationConfig& c) {
  const double r_h = n[0] / duration;
  const double s1 = n[1] / duration;
  const double s2 = n[2] / duration;
  Rates r;
  r.r_h = dead_time_correct(r_h, c.sspd_dead_time_s);
  // APD1 is only gated by recorded heralds, and APD2 only by APD1 clicks, so
  // each downstream rate also carries the live fractions upstream of it.
  const double sspd_live = r_h > 0.0 ? r.r_h / r_h : 1.0;
  r.s1 = dead_time_correct(s1, c.apd1_dead_time_s);
  const double apd1_live = s1 > 0.0 ? r.s1 / s1 : 1.0;
  r.s1 *= sspd_live;
  r.s2 = dead_time_correct(s2, c.apd2_dead_time_s) * apd1_live * sspd_live;
  return r;
}

// Value and first-order Poisson error of fn at the observed counts.
Figure propagate(const FigureFn& fn, const Counts& n) {
  double value = 0.0;
  try {
    value = fn(n);
  } catch (const DomainError& e) {
    return Figure::undefined(e.what());
  }
  double var = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double sigma = n[i] > 0.0 ? std::sqrt(n[i]) : 1.0;
    const double h = std::max(1e-6 * n[i], 1e-6);
    Counts up = n;
    up[i] += h;
    double deriv = 0.0;
    try {
      if (n[i] > h) {
        Counts down = n;
        down[i] -= h;
        deriv = (fn(up) - fn(down)) / (2.0 * h);
      } else {
        deriv = (fn(up) - value) / h;
      }
    } catch (const DomainError&) {
      // Perturbation crossed saturation: the error bar is unbounded.
      return Figure{value, std::numeric_limits<double>::infinity(), {}};
    }
    var += deriv * deriv * sigma * sigma;
  }
  return Figure::of(value, std::sqrt(var));
}

}  // namespace

void validate(const EstimationConfig& c) {
  auto eff = [](double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; };
  auto nonneg = [](double x) { return std::isfinite(x) && x >= 0.0; };
  if (!eff(c.eta_1) || !eff(c.eta_2) || !eff(c.eta_d)) {
    throw ConfigError("estimation.eta", "detector efficiencies must lie in (0, 1]");
  }
  if (!(c.rep_rate_hz > 0.0 && std::isfinite(c.rep_rate_hz))) {
    throw ConfigError("estimation.rep_rate_hz", "repetition rate must be > 0");
  }
  if (!nonneg(c.sspd_dead_time_s) || !nonneg(c.apd1_dead_time_s) || !nonneg(c.apd2_dead_time_s)) {
    throw ConfigError("estimation.dead_time", "dead times must be >= 0");
  }
  if (!eff(c.gamma) || !eff(c.t_h)) {
    throw ConfigError("estimation.gamma", "gamma and T_H must lie in (0, 1]");
  }
}

EstimationConfig estimation_config_for(const SimScenario& s) {
  EstimationConfig c;
  c.eta_1 = s.apd1.efficiency;
  c.eta_2 = s.apd2.efficiency;
  c.eta_d = s.sspd.efficiency;
  c.sspd_dead_time_s = s.sspd.dead_time_s;
  c.apd1_dead_time_s = s.apd1.dead_time_s;
  c.apd2_dead_time_s = s.apd2.dead_time_s;
  c.rep_rate_hz = s.source.rep_rate_hz;
  c.gamma = s.source.gamma;
  c.t_h = s.source.signal_transmission();
  return c;
}

FiguresOfMerit estimate(const CountingTotals& totals, const EstimationConfig& cfg) {
  validate(cfg);
  if (!(totals.duration_s > 0.0)) throw DomainError("estimate: run duration must be > 0");
  const double T = totals.duration_s;
  const Counts n{static_cast<double>(totals.heralds), static_cast<double>(totals.s1_counts),
                 static_cast<double>(totals.s2_counts)};

  FiguresOfMerit f;
  f.r_h_hz = propagate([&](const Counts& c) { return corrected_rates(c, T, cfg).r_h; }, n);
  f.s1_hz = propagate([&](const Counts& c) { return corrected_rates(c, T, cfg).s1; }, n);
  f.s2_hz = propagate([&](const Counts& c) { return corrected_rates(c, T, cfg).s2; }, n);
  f.n_mean = propagate(
      [&](const Counts& c) {
        return invert_heralding_rate(corrected_rates(c, T, cfg).r_h, cfg.rep_rate_hz, cfg.gamma,
                                     cfg.t_h, cfg.eta_d);
      },
      n);

  if (totals.heralds == 0) {
    f.p1 = Figure::undefined("no heralds recorded (R_H = 0)");
  } else {
    f.p1 = propagate(
        [&](const Counts& c) {
          const Rates r = corrected_rates(c, T, cfg);
          return heralding_efficiency(r.s1, r.r_h, cfg.eta_1);
        },
        n);
  }

  if (totals.s1_counts == 0) {
    f.g2 = Figure::undefined("no accepted APD1 clicks (S1 = 0)");
  } else {
    f.g2 = propagate(
        [&](const Counts& c) {
          const Rates r = corrected_rates(c, T, cfg);
          return autocorrelation(r.r_h, r.s1, r.s2, cfg.eta_1, cfg.eta_2);
        },
        n);
  }

  if (totals.s1_counts > 0) {
    const double ratio = n[2] / n[1];
    if (ratio > cfg.s2_s1_warning_ratio) {
      f.warnings.push_back("S2/S1 = " + std::to_string(ratio) +
                           " is not small; the g2 estimator assumes S2 << S1");
    }
  }
  return f;
}

TheoryOverlay theory_overlay(const FiguresOfMerit& figures, PairStatistics statistics) {
  TheoryOverlay o;
  if (!figures.n_mean.defined()) {
    o.residual = Figure::undefined("<n> undefined: " + figures.n_mean.undefined_reason);
    return o;
  }
  o.g2_theory = single_mode_g2_theory(std::max(0.0, *figures.n_mean.value), statistics);
  if (!figures.g2.defined()) {
    o.residual = Figure::undefined("g2 undefined: " + figures.g2.undefined_reason);
    return o;
  }
  o.residual = Figure::of(*figures.g2.value - o.g2_theory, figures.g2.sigma);
  return o;
}

}  // namespace hsps
