// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hsps/model.hpp"
#include "hsps/random.hpp"

namespace hsps {

/*!
 * Event time as (pulse slot, offset within the slot).
 *
 * The slot index is exact over any realistic run (1 s at 10 GHz is 1e10
 * slots); offsets stay small so no precision is lost far into a run.
 */
struct Timestamp {
  std::int64_t pulse = 0;
  double offset_ps = 0.0;

  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// Maps timestamps onto a local picosecond axis anchored at `origin_pulse`.
class Timeline {
 public:
  Timeline(double period_ps, std::int64_t origin_pulse = 0)
      : period_ps_(period_ps), origin_(origin_pulse) {}

  double period_ps() const { return period_ps_; }
  std::int64_t origin_pulse() const { return origin_; }

  double to_ps(Timestamp t) const {
    return static_cast<double>(t.pulse - origin_) * period_ps_ + t.offset_ps;
  }
  //! Nearest-below slot with offset in [0, period).
  Timestamp to_stamp(double ps) const;
  //! Local time of the start of `pulse`.
  double slot_ps(std::int64_t pulse) const {
    return static_cast<double>(pulse - origin_) * period_ps_;
  }

 private:
  double period_ps_;
  std::int64_t origin_;
};

enum class DetectorId : std::uint8_t { sspd, apd1, apd2 };
enum class Origin : std::uint8_t { photon_correlated, photon_uncorrelated, dark };

std::string_view to_string(DetectorId id);
std::string_view to_string(Origin o);

/// A photon reaching a detector input.
struct PhotonArrival {
  Timestamp time;
  Origin origin = Origin::photon_correlated;
  //! Pump pulse that produced the photon.
  std::int64_t source_pulse = 0;
};

/// A detection event; dark clicks carry source_pulse = -1.
struct ClickRecord {
  DetectorId detector = DetectorId::sspd;
  std::int64_t pulse_index = 0;
  double offset_ps = 0.0;
  Origin origin = Origin::dark;
  std::int64_t source_pulse = -1;

  Timestamp time() const { return {pulse_index, offset_ps}; }
};

/// Detector-side candidate on a local time axis (see Timeline).
struct Candidate {
  //! jittered click time
  double time_ps = 0.0;
  //! photon arrival time before jitter
  double arrival_ps = 0.0;
  Origin origin = Origin::dark;
  std::int64_t source_pulse = -1;
};

//! Accepted iff 0 <= click - trigger <= window.
bool tac_gate(double click_time_ps, double trigger_time_ps, double window_ps);

//! Efficiency thinning and Gaussian jitter of time-ordered arrivals. The
//! result is sorted by click time.
std::vector<Candidate> photon_candidates(std::span<const PhotonArrival> arrivals,
                                         const DetectorModel& model, Rng& rng,
                                         const Timeline& timeline);

//! Appends Poisson dark candidates at `rate_hz` over [begin_ps, end_ps).
void add_dark_candidates(std::vector<Candidate>& out, double rate_hz, double begin_ps,
                         double end_ps, Rng& rng);

/// Non-paralyzable dead-time bookkeeping.
class DeadTime {
 public:
  explicit DeadTime(double dead_time_ps) : dead_ps_(dead_time_ps) {}

  bool live_at(double t_ps) const { return t_ps >= dead_until_; }
  //! Registers a click at t (must be live).
  void fire(double t_ps) { dead_until_ = t_ps + dead_ps_; }
  double dead_until() const { return dead_until_; }

 private:
  double dead_ps_;
  double dead_until_ = -1.0e300;
};

/*!
 * Free-running detection with dead time.
 *
 * Keeps the candidates of a sorted sequence that fall outside the dead time
 * of the previous kept click. Candidates inside the dead time are dropped
 * and do not extend it.
 */
std::vector<Candidate> apply_dead_time(std::span<const Candidate> sorted, double dead_time_ps);

/*!
 * Detect time-ordered arrivals with a free-running detector.
 *
 * Each arrival clicks with probability `efficiency` after Gaussian jitter;
 * Poisson dark clicks at `dark_rate_hz` are added over [span_begin,
 * span_end). Dead time is enforced last. Throws std::logic_error if the
 * arrivals are not time-ordered, DomainError for a triggered model.
 */
std::vector<ClickRecord> detect(std::span<const PhotonArrival> arrivals,
                                const DetectorModel& model, Rng& rng,
                                const Timeline& timeline, Timestamp span_begin,
                                Timestamp span_end, DetectorId id = DetectorId::sspd);

/*!
 * Triggered detector fed by a sorted candidate list.
 *
 * `fire` opens a gate of `gate_window_ps` starting at `open_ps` if the
 * detector is live. The click is the earliest photon candidate inside the
 * gate or a per-gate dark click placed uniformly in the gate, whichever
 * comes first. Gates must be opened in non-decreasing time order.
 */
class GatedDetector {
 public:
  GatedDetector(const DetectorModel& model, std::vector<Candidate> sorted_candidates);

  std::optional<Candidate> fire(double open_ps, Rng& rng);
  bool live_at(double t_ps) const { return dead_.live_at(t_ps); }
  std::size_t gates_opened() const { return gates_; }

 private:
  DetectorModel model_;
  std::vector<Candidate> candidates_;
  std::size_t cursor_ = 0;
  DeadTime dead_;
  std::size_t gates_ = 0;
};

}  // namespace hsps
