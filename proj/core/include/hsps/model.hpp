// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsps {

//---------------------------------------------------------------------------//
// Domain types
//---------------------------------------------------------------------------//

/// Photon-pair number law of a single down-conversion mode.
enum class PairStatistics { thermal, poissonian };

std::string_view to_string(PairStatistics s);
PairStatistics parse_pair_statistics(std::string_view s);

/*!
 * Laser, conversion stages, filters and optical losses of the source.
 *
 * Default values describe the 10 GHz telecom source: 40 mW of 1540 nm pump,
 * 20 % SHG, 2.5e5 pairs/mW/s/GHz, 25 GHz heralding and 200 GHz heralded
 * filters, gamma = 0.60 and the quoted 2.5 dB / 1.9 dB path losses. The two
 * `*_excess_loss_db` fields are calibration offsets that make the closed
 * forms reproduce the reported operating point (R_H = 2.1 MHz at
 * <n> = 0.005, P1 = 0.42). They may be negative as long as the total path
 * loss stays non-negative; set both to zero for the as-quoted reading.
 */
struct SourceConfig {
  double rep_rate_hz = 10.0e9;
  double laser_power_mw = 40.0;
  double shg_efficiency = 0.20;
  //! Power-law exponent of the SHG stage; only the linear model (1) exists.
  double shg_exponent = 1.0;
  //! pairs / mW / s / GHz in the heralding band
  double brightness = 2.5e5;
  double heralding_bw_ghz = 25.0;
  double heralded_bw_ghz = 200.0;
  double gamma = 0.60;
  double signal_loss_db = 2.5;
  double idler_loss_db = 1.9;
  double signal_excess_loss_db = 1.3535088136401714;
  double idler_excess_loss_db = -0.35098040014256804;
  //! Mean of each spurious idler-band mode relative to the heralding mode.
  double spurious_mode_weight = 0.0;
  PairStatistics statistics = PairStatistics::thermal;

  double pulse_period_ps() const { return 1.0e12 / rep_rate_hz; }
  //! Heralding-path transmission T_H (fiber to SSPD), calibration included.
  double signal_transmission() const;
  //! Heralded-path transmission T (fiber to the HBT beam splitter).
  double idler_transmission() const;

  friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

void validate(const SourceConfig& cfg);

enum class DetectorMode { free_running, triggered };

std::string_view to_string(DetectorMode m);
DetectorMode parse_detector_mode(std::string_view s);

/*!
 * Single-photon detector response.
 *
 * Free-running detectors use `dark_rate_hz`; triggered ones use
 * `dark_prob_per_gate` and `gate_window_ps`. The inactive dark field must be
 * zero.
 */
struct DetectorModel {
  double efficiency = 1.0;
  double dark_rate_hz = 0.0;
  double dark_prob_per_gate = 0.0;
  double jitter_fwhm_ps = 0.0;
  double dead_time_s = 0.0;
  DetectorMode mode = DetectorMode::free_running;
  double gate_window_ps = 0.0;

  //! Gaussian sigma, the FWHM divided by 2 sqrt(2 ln 2).
  double jitter_sigma_ps() const;

  friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

void validate(const DetectorModel& det, std::string_view name = "detector");

//! Superconducting heralding detector: eta_D = 0.17, 100 Hz darks, 57 ps.
DetectorModel default_sspd();
//! Triggered InGaAs APD of the HBT: eta = 0.25, 120 ps, 10 us dead time.
DetectorModel default_apd(double gate_window_ps);

/// Spectral and temporal mode bookkeeping for the heralded arm.
struct ModeStructure {
  int n_spectral = 1;
  int n_temporal = 1;
  //! Mean pairs per pulse in each mode; equals <n> of the heralding band.
  double mu_per_mode = 0.0;

  friend bool operator==(const ModeStructure&, const ModeStructure&) = default;
};

void validate(const ModeStructure& modes);

/*!
 * A derived quantity with its one-sigma statistical uncertainty.
 *
 * An undefined figure (division by zero counts, saturated correction) has
 * no value and carries the reason instead.
 */
struct Figure {
  std::optional<double> value;
  double sigma = 0.0;
  std::string undefined_reason;

  static Figure of(double v, double s = 0.0) { return Figure{v, s, {}}; }
  static Figure undefined(std::string reason) {
    return Figure{std::nullopt, 0.0, std::move(reason)};
  }
  bool defined() const { return value.has_value(); }
  double value_or(double fallback) const { return value.value_or(fallback); }
};

struct FiguresOfMerit {
  Figure r_h_hz;
  Figure s1_hz;
  Figure s2_hz;
  Figure p1;
  Figure g2;
  Figure n_mean;
  std::vector<std::string> warnings;
};

//---------------------------------------------------------------------------//
// Closed-form relations
//---------------------------------------------------------------------------//

//! Power-dB insertion loss to linear transmission, 10^(-dB/10).
double db_to_transmission(double loss_db);
//! Inverse of db_to_transmission for transmissions in (0, 1].
double transmission_to_db(double transmission);

//! Mean pairs per pulse: brightness * pump * bandwidth / repetition rate.
double mean_pairs_from_pump(double spdc_pump_mw, double brightness,
                            double bandwidth_ghz, double rep_rate_hz);

//! SPDC pump power after the fixed-efficiency SHG stage.
double shg_pump(double laser_power_mw, double shg_efficiency);

//! <n> in the heralding band implied by the source configuration.
double source_mean_pairs(const SourceConfig& cfg);

//! R_H = f <n> gamma T_H eta_D.
double heralding_rate(double rep_rate_hz, double n_mean, double gamma,
                      double t_h, double eta_d);

//! <n> from a measured heralding rate; exact inverse of heralding_rate.
double invert_heralding_rate(double r_h_hz, double rep_rate_hz, double gamma,
                             double t_h, double eta_d);

//! P1 = 2 S1 / (R_H eta_1).
double heralding_efficiency(double s1_hz, double r_h_hz, double eta_1);

//! g2(0) = R_H S2 eta_1 / (S1^2 eta_2), valid for S2 << S1.
double autocorrelation(double r_h_hz, double s1_hz, double s2_hz,
                       double eta_1, double eta_2);

//! Non-paralyzable correction: measured / (1 - measured * dead_time).
double dead_time_correct(double measured_rate_hz, double dead_time_s);
//! Forward model: true / (1 + true * dead_time).
double dead_time_apply(double true_rate_hz, double dead_time_s);

struct ModeCounts {
  int spectral = 1;
  int temporal = 1;

  friend bool operator==(const ModeCounts&, const ModeCounts&) = default;
};

//! N_f = round(heralded / heralding bandwidth), N_t = round(window / period),
//! both floored at 1.
ModeCounts mode_counts(double heralded_bw_ghz, double heralding_bw_ghz,
                       double window_ps, double pulse_period_ps);

//! Largest heralding-band <n> keeping the heralded-arm photon number
//! (summed over N_f * N_t modes) below `multi_photon_cap`.
double multimode_heralding_limit(int n_f, int n_t,
                                 double multi_photon_cap = 0.1);

/// Default enumeration cutoff for single_mode_g2_theory.
inline constexpr int kDefaultG2Cutoff = 40;

/*!
 * Heralded g2(0) of one mode under low-efficiency heralding.
 *
 * The herald reweights the pair law P(n) into Q(n) = n P(n) / <n>; the
 * result is sum n(n-1) Q(n) / (sum n Q(n))^2 by direct enumeration. The
 * cutoff starts at `n_max` and grows until five more terms change the
 * result by less than 1e-12 relative.
 */
double single_mode_g2_theory(double mu, PairStatistics statistics,
                             int n_max = kDefaultG2Cutoff);

/// Detector constants entering the closed-form figures.
struct AnalyticDetectors {
  double eta_d = 0.17;
  double eta_1 = 0.25;
  double eta_2 = 0.25;
};

/*!
 * Figures of merit from closed forms only.
 *
 * <n> follows from the pump chain unless `n_mean_override` is set. S1 uses
 * P1 = gamma * T, and S2 is back-solved from the single-mode g2 theory so
 * that the estimator relations hold exactly. Uncertainties are zero.
 */
FiguresOfMerit analytic_figures(const SourceConfig& cfg,
                                const AnalyticDetectors& det,
                                std::optional<double> n_mean_override = {});

}  // namespace hsps
