// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hsps/detector.hpp"
#include "hsps/model.hpp"

namespace hsps {

/*!
 * Everything needed to simulate one run of the heralded source.
 *
 * The TAC windows open at `trigger + tac*_offset_ps`; the defaults centre
 * them on the expected photon so that the 300 ps window spans three pump
 * pulses and the 400 ps window four. APD2 is triggered by the accepted APD1
 * click; with `apd2_trigger_jitter` off it uses the photon arrival time
 * underneath that click instead.
 */
struct SimScenario {
  SourceConfig source;
  DetectorModel sspd = default_sspd();
  DetectorModel apd1 = default_apd(300.0);
  DetectorModel apd2 = default_apd(400.0);
  ModeStructure modes{8, 4, 0.005};
  double tac1_window_ps = 300.0;
  double tac2_window_ps = 400.0;
  double tac1_offset_ps = -150.0;
  double tac2_offset_ps = -200.0;
  bool apd2_trigger_jitter = true;
  double duration_s = 10e-3;
  std::uint64_t seed = 1;
  std::uint64_t block_size_pulses = 10'000'000;

  std::uint64_t total_pulses() const;
  std::uint64_t block_count() const;

  friend bool operator==(const SimScenario&, const SimScenario&) = default;
};

void validate(const SimScenario& s);

//! Calibrated multimode scenario: <n> from the pump chain, N_f and N_t from
//! the filter bandwidths and the APD2 window.
SimScenario calibrated_scenario();

/*!
 * One spectral mode, one pulse per TAC window, ideal detectors (unit
 * efficiency, no darks, jitter or dead time) and a lossless idler path.
 * The heralding arm keeps `herald_transmission` so that heralding stays in
 * the low-efficiency regime the single-mode theory assumes.
 */
SimScenario single_mode_scenario(double mu, PairStatistics statistics,
                                 double herald_transmission = 0.05);

/// Click counts split by origin.
struct OriginCounts {
  std::uint64_t correlated = 0;
  std::uint64_t uncorrelated = 0;
  std::uint64_t dark = 0;

  std::uint64_t total() const { return correlated + uncorrelated + dark; }
  void add(Origin o);
  OriginCounts& operator+=(const OriginCounts& o);
  friend bool operator==(const OriginCounts&, const OriginCounts&) = default;
};

/// Raw counts of a run; additive across blocks.
struct CountingTotals {
  std::uint64_t pulses = 0;
  std::uint64_t heralds = 0;
  std::uint64_t s1_counts = 0;
  std::uint64_t s2_counts = 0;
  double duration_s = 0.0;
  double sspd_busy_s = 0.0;
  double apd1_busy_s = 0.0;
  double apd2_busy_s = 0.0;
  //! gates that found the APD live
  std::uint64_t apd1_gates = 0;
  std::uint64_t apd2_gates = 0;
  OriginCounts herald_origin;
  OriginCounts s1_origin;
  OriginCounts s2_origin;

  CountingTotals& operator+=(const CountingTotals& o);
  friend bool operator==(const CountingTotals&, const CountingTotals&) = default;
};

//! Throws InvariantError if counters are inconsistent.
void check_invariants(const CountingTotals& t);

/*!
 * Simulate pulses [b * block_size, (b + 1) * block_size) of the run.
 *
 * The block owns the Philox stream (seed, b). Detector state is warmed up
 * by replaying the preceding max(dead time, window) of pulse train with the
 * block's own stream, and a few pulses past the block end are generated so
 * that late gates see their photons. Only heralds inside the block are
 * counted. When `clicks` is non-null, counted SSPD/APD clicks are appended.
 */
CountingTotals run_block(const SimScenario& s, std::uint64_t block_index,
                         std::vector<ClickRecord>* clicks = nullptr);

/*!
 * Simulate the whole run on up to `threads` workers.
 *
 * Blocks are independent and their totals are merged in block order, so
 * the result depends on (scenario, seed, block size) only.
 */
CountingTotals run(const SimScenario& s, unsigned threads = 1);

}  // namespace hsps
