// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsps/error.hpp"

namespace hsps {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }
bool is_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void check_config(bool ok, std::string field, const std::string& what) {
  if (!ok) throw ConfigError(std::move(field), field + ": " + what);
}

// log P(n) for the per-mode pair law with mean mu > 0.
double log_pmf(PairStatistics s, double mu, int n) {
  if (s == PairStatistics::thermal) {
    return n * std::log(mu) - (n + 1) * std::log1p(mu);
  }
  return n * std::log(mu) - mu - std::lgamma(n + 1.0);
}

double g2_enumerated(double mu, PairStatistics s, int n_max) {
  // Size-biased law Q(n) = n P(n) / <n>; only its first two factorial
  // moments are needed, and the normalisation cancels in the ratio.
  double m1 = 0.0;  // sum n * n P(n)
  double m2 = 0.0;  // sum n(n-1) * n P(n)
  double m0 = 0.0;  // sum n P(n)
  for (int n = 1; n <= n_max; ++n) {
    const double w = n * std::exp(log_pmf(s, mu, n));
    m0 += w;
    m1 += n * w;
    m2 += (n - 1.0) * n * w;
  }
  if (m0 <= 0.0) return 0.0;
  const double mean = m1 / m0;
  return (m2 / m0) / (mean * mean);
}

}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(PairStatistics s) {
  return s == PairStatistics::thermal ? "thermal" : "poissonian";
}

PairStatistics parse_pair_statistics(std::string_view s) {
  if (s == "thermal") return PairStatistics::thermal;
  if (s == "poissonian" || s == "poisson") return PairStatistics::poissonian;
  throw DomainError("unknown pair statistics '" + std::string(s) +
                    "' (expected thermal or poissonian)");
}

std::string_view to_string(DetectorMode m) {
  return m == DetectorMode::free_running ? "free_running" : "triggered";
}

DetectorMode parse_detector_mode(std::string_view s) {
  if (s == "free_running") return DetectorMode::free_running;
  if (s == "triggered") return DetectorMode::triggered;
  throw DomainError("unknown detector mode '" + std::string(s) +
                    "' (expected free_running or triggered)");
}

//---------------------------------------------------------------------------//
double SourceConfig::signal_transmission() const {
  return db_to_transmission(signal_loss_db + signal_excess_loss_db);
}

double SourceConfig::idler_transmission() const {
  return db_to_transmission(idler_loss_db + idler_excess_loss_db);
}

void validate(const SourceConfig& c) {
  check_config(std::isfinite(c.rep_rate_hz) && c.rep_rate_hz > 0.0,
               "source.rep_rate_hz", "must be > 0");
  check_config(is_nonneg(c.laser_power_mw), "source.laser_power_mw", "must be >= 0");
  check_config(is_probability(c.shg_efficiency), "source.shg_efficiency",
               "must lie in [0, 1]");
  check_config(c.shg_exponent == 1.0, "source.shg_exponent",
               "only the linear SHG model (exponent 1) is implemented");
  check_config(is_nonneg(c.brightness), "source.brightness", "must be >= 0");
  check_config(is_nonneg(c.heralding_bw_ghz), "source.heralding_bw_ghz", "must be >= 0");
  check_config(is_nonneg(c.heralded_bw_ghz), "source.heralded_bw_ghz", "must be >= 0");
  check_config(is_probability(c.gamma), "source.gamma", "must lie in [0, 1]");
  check_config(is_nonneg(c.signal_loss_db), "source.signal_loss_db", "must be >= 0");
  check_config(is_nonneg(c.idler_loss_db), "source.idler_loss_db", "must be >= 0");
  check_config(is_nonneg(c.signal_loss_db + c.signal_excess_loss_db),
               "source.signal_excess_loss_db", "total signal-path loss must be >= 0");
  check_config(is_nonneg(c.idler_loss_db + c.idler_excess_loss_db),
               "source.idler_excess_loss_db", "total idler-path loss must be >= 0");
  check_config(is_nonneg(c.spurious_mode_weight), "source.spurious_mode_weight",
               "must be >= 0");
}

double DetectorModel::jitter_sigma_ps() const {
  return jitter_fwhm_ps / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

void validate(const DetectorModel& d, std::string_view name) {
  const std::string n(name);
  check_config(is_probability(d.efficiency), n + ".efficiency", "must lie in [0, 1]");
  check_config(is_probability(d.dark_prob_per_gate), n + ".dark_prob_per_gate",
               "must lie in [0, 1]");
  check_config(is_nonneg(d.dark_rate_hz), n + ".dark_rate_hz", "must be >= 0");
  check_config(is_nonneg(d.jitter_fwhm_ps), n + ".jitter_fwhm_ps", "must be >= 0");
  check_config(is_nonneg(d.dead_time_s), n + ".dead_time_s", "must be >= 0");
  check_config(is_nonneg(d.gate_window_ps), n + ".gate_window_ps", "must be >= 0");
  if (d.mode == DetectorMode::free_running) {
    check_config(d.dark_prob_per_gate == 0.0, n + ".dark_prob_per_gate",
                 "not used by a free-running detector; must be 0");
  } else {
    check_config(d.dark_rate_hz == 0.0, n + ".dark_rate_hz",
                 "not used by a triggered detector; must be 0");
  }
}

DetectorModel default_sspd() {
  DetectorModel d;
  d.efficiency = 0.17;
  d.dark_rate_hz = 100.0;
  d.jitter_fwhm_ps = 57.0;
  // Not quoted; negligible at MHz rates.
  d.dead_time_s = 50e-9;
  d.mode = DetectorMode::free_running;
  return d;
}

DetectorModel default_apd(double gate_window_ps) {
  DetectorModel d;
  d.efficiency = 0.25;
  // No APD dark figure is quoted; 1e-5 per gate is a placeholder.
  d.dark_prob_per_gate = 1e-5;
  d.jitter_fwhm_ps = 120.0;
  d.dead_time_s = 10e-6;
  d.mode = DetectorMode::triggered;
  d.gate_window_ps = gate_window_ps;
  return d;
}

void validate(const ModeStructure& m) {
  check_config(m.n_spectral >= 1, "modes.n_spectral", "must be >= 1");
  check_config(m.n_temporal >= 1, "modes.n_temporal", "must be >= 1");
  check_config(is_nonneg(m.mu_per_mode), "modes.mu_per_mode", "must be >= 0");
}

//---------------------------------------------------------------------------//
double db_to_transmission(double loss_db) {
  require(std::isfinite(loss_db) && loss_db >= 0.0,
          "db_to_transmission: loss must be finite and >= 0 dB");
  return std::pow(10.0, -loss_db / 10.0);
}

double transmission_to_db(double transmission) {
  require(std::isfinite(transmission) && transmission > 0.0 && transmission <= 1.0,
          "transmission_to_db: transmission must lie in (0, 1]");
  return -10.0 * std::log10(transmission);
}

double mean_pairs_from_pump(double spdc_pump_mw, double brightness,
                            double bandwidth_ghz, double rep_rate_hz) {
  require(std::isfinite(rep_rate_hz) && rep_rate_hz > 0.0,
          "mean_pairs_from_pump: repetition rate must be > 0");
  require(is_nonneg(spdc_pump_mw) && is_nonneg(brightness) && is_nonneg(bandwidth_ghz),
          "mean_pairs_from_pump: inputs must be >= 0");
  return brightness * spdc_pump_mw * bandwidth_ghz / rep_rate_hz;
}

double shg_pump(double laser_power_mw, double shg_efficiency) {
  require(is_nonneg(laser_power_mw), "shg_pump: laser power must be >= 0");
  require(is_probability(shg_efficiency), "shg_pump: efficiency must lie in [0, 1]");
  return laser_power_mw * shg_efficiency;
}

double source_mean_pairs(const SourceConfig& c) {
  return mean_pairs_from_pump(shg_pump(c.laser_power_mw, c.shg_efficiency),
                              c.brightness, c.heralding_bw_ghz, c.rep_rate_hz);
}

double heralding_rate(double rep_rate_hz, double n_mean, double gamma, double t_h,
                      double eta_d) {
  require(std::isfinite(rep_rate_hz) && rep_rate_hz > 0.0,
          "heralding_rate: repetition rate must be > 0");
  require(is_nonneg(n_mean), "heralding_rate: <n> must be >= 0");
  require(is_probability(gamma) && is_probability(t_h) && is_probability(eta_d),
          "heralding_rate: efficiencies must lie in [0, 1]");
  return rep_rate_hz * n_mean * gamma * t_h * eta_d;
}

double invert_heralding_rate(double r_h_hz, double rep_rate_hz, double gamma,
                             double t_h, double eta_d) {
  require(is_nonneg(r_h_hz), "invert_heralding_rate: rate must be >= 0");
  const double denom = rep_rate_hz * gamma * t_h * eta_d;
  require(std::isfinite(denom) && denom > 0.0,
          "invert_heralding_rate: f * gamma * T_H * eta_D must be > 0");
  return r_h_hz / denom;
}

double heralding_efficiency(double s1_hz, double r_h_hz, double eta_1) {
  require(is_nonneg(s1_hz), "heralding_efficiency: S1 must be >= 0");
  require(std::isfinite(r_h_hz) && r_h_hz > 0.0 && std::isfinite(eta_1) && eta_1 > 0.0,
          "heralding_efficiency: R_H and eta_1 must be > 0");
  return 2.0 * s1_hz / (r_h_hz * eta_1);
}

double autocorrelation(double r_h_hz, double s1_hz, double s2_hz, double eta_1,
                       double eta_2) {
  require(is_nonneg(r_h_hz) && is_nonneg(s2_hz) && is_nonneg(eta_1),
          "autocorrelation: inputs must be >= 0");
  require(std::isfinite(s1_hz) && s1_hz > 0.0 && std::isfinite(eta_2) && eta_2 > 0.0,
          "autocorrelation: S1 and eta_2 must be > 0");
  return r_h_hz * s2_hz * eta_1 / (s1_hz * s1_hz * eta_2);
}

double dead_time_correct(double measured_rate_hz, double dead_time_s) {
  require(is_nonneg(measured_rate_hz) && is_nonneg(dead_time_s),
          "dead_time_correct: rate and dead time must be >= 0");
  const double load = measured_rate_hz * dead_time_s;
  if (load >= 1.0) {
    throw SaturationError("dead_time_correct: measured rate * dead time = " +
                          std::to_string(load) + " >= 1 (saturated)");
  }
  return measured_rate_hz / (1.0 - load);
}

double dead_time_apply(double true_rate_hz, double dead_time_s) {
  require(is_nonneg(true_rate_hz) && is_nonneg(dead_time_s),
          "dead_time_apply: rate and dead time must be >= 0");
  return true_rate_hz / (1.0 + true_rate_hz * dead_time_s);
}

ModeCounts mode_counts(double heralded_bw_ghz, double heralding_bw_ghz,
                       double window_ps, double pulse_period_ps) {
  const bool ok = heralded_bw_ghz > 0.0 && heralding_bw_ghz > 0.0 && window_ps > 0.0 &&
                  pulse_period_ps > 0.0 && std::isfinite(heralded_bw_ghz) &&
                  std::isfinite(heralding_bw_ghz) && std::isfinite(window_ps) &&
                  std::isfinite(pulse_period_ps);
  require(ok, "mode_counts: bandwidths, window and period must be > 0");
  ModeCounts m;
  m.spectral = std::max(1, static_cast<int>(std::lround(heralded_bw_ghz / heralding_bw_ghz)));
  m.temporal = std::max(1, static_cast<int>(std::lround(window_ps / pulse_period_ps)));
  return m;
}

double multimode_heralding_limit(int n_f, int n_t, double multi_photon_cap) {
  require(n_f >= 1 && n_t >= 1, "multimode_heralding_limit: mode counts must be >= 1");
  require(multi_photon_cap > 0.0 && multi_photon_cap < 1.0,
          "multimode_heralding_limit: cap must lie in (0, 1)");
  return multi_photon_cap / (static_cast<double>(n_f) * n_t);
}

double single_mode_g2_theory(double mu, PairStatistics statistics, int n_max) {
  require(std::isfinite(mu) && mu >= 0.0, "single_mode_g2_theory: mu must be >= 0");
  require(n_max >= 2, "single_mode_g2_theory: cutoff must be >= 2");
  if (mu == 0.0) return 0.0;

  double g2 = g2_enumerated(mu, statistics, n_max);
  for (int n = n_max + 5; n <= 100000; n += 5) {
    const double next = g2_enumerated(mu, statistics, n);
    const bool stable = std::abs(next - g2) <= 1e-12 * std::abs(next);
    g2 = next;
    if (stable) break;
  }
  return g2;
}

FiguresOfMerit analytic_figures(const SourceConfig& cfg, const AnalyticDetectors& det,
                                std::optional<double> n_mean_override) {
  validate(cfg);
  const double n_mean = n_mean_override ? *n_mean_override : source_mean_pairs(cfg);
  const double t_h = cfg.signal_transmission();
  const double r_h = heralding_rate(cfg.rep_rate_hz, n_mean, cfg.gamma, t_h, det.eta_d);
  const double p1_direct = cfg.gamma * cfg.idler_transmission();
  const double s1 = r_h * p1_direct * det.eta_1 / 2.0;
  const double g2 = single_mode_g2_theory(n_mean, cfg.statistics);
  const double s2 = r_h > 0.0 ? g2 * s1 * s1 * det.eta_2 / (r_h * det.eta_1) : 0.0;

  FiguresOfMerit f;
  f.r_h_hz = Figure::of(r_h);
  f.s1_hz = Figure::of(s1);
  f.s2_hz = Figure::of(s2);
  f.p1 = Figure::of(r_h > 0.0 ? heralding_efficiency(s1, r_h, det.eta_1) : p1_direct);
  f.g2 = Figure::of(s1 > 0.0 ? autocorrelation(r_h, s1, s2, det.eta_1, det.eta_2) : g2);
  const bool invertible = cfg.gamma * t_h * det.eta_d > 0.0;
  f.n_mean = Figure::of(invertible ? invert_heralding_rate(r_h, cfg.rep_rate_hz, cfg.gamma,
                                                           t_h, det.eta_d)
                                   : n_mean);
  return f;
}

}  // namespace hsps
