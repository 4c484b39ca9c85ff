// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/detector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hsps/error.hpp"

namespace hsps {

Timestamp Timeline::to_stamp(double ps) const {
  const double slots = std::floor(ps / period_ps_);
  Timestamp t{origin_ + static_cast<std::int64_t>(slots), ps - slots * period_ps_};
  if (t.offset_ps >= period_ps_) {
    t.pulse += 1;
    t.offset_ps -= period_ps_;
  }
  return t;
}

std::string_view to_string(DetectorId id) {
  switch (id) {
    case DetectorId::sspd: return "SSPD";
    case DetectorId::apd1: return "APD1";
    case DetectorId::apd2: return "APD2";
  }
  return "?";
}

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::photon_correlated: return "photon_correlated";
    case Origin::photon_uncorrelated: return "photon_uncorrelated";
    case Origin::dark: return "dark";
  }
  return "?";
}

bool tac_gate(double click_time_ps, double trigger_time_ps, double window_ps) {
  const double dt = click_time_ps - trigger_time_ps;
  return dt >= 0.0 && dt <= window_ps;
}

std::vector<Candidate> photon_candidates(std::span<const PhotonArrival> arrivals,
                                         const DetectorModel& model, Rng& rng,
                                         const Timeline& timeline) {
  std::vector<Candidate> out;
  const double sigma = model.jitter_sigma_ps();
  std::normal_distribution<double> jitter(0.0, sigma > 0.0 ? sigma : 1.0);
  double last = -1.0e300;
  for (const auto& a : arrivals) {
    const double t = timeline.to_ps(a.time);
    if (t < last) throw std::logic_error("photon_candidates: arrivals are not time-ordered");
    last = t;
    if (!bernoulli(rng, model.efficiency)) continue;
    const double click = sigma > 0.0 ? t + jitter(rng) : t;
    out.push_back({click, t, a.origin, a.source_pulse});
  }
  // Jitter can swap neighbours; the sequence stays nearly sorted.
  std::stable_sort(out.begin(), out.end(),
                   [](const Candidate& a, const Candidate& b) { return a.time_ps < b.time_ps; });
  return out;
}

void add_dark_candidates(std::vector<Candidate>& out, double rate_hz, double begin_ps,
                         double end_ps, Rng& rng) {
  if (rate_hz <= 0.0 || end_ps <= begin_ps) return;
  const double mean_gap_ps = 1.0e12 / rate_hz;
  double t = begin_ps;
  while (true) {
    t += -std::log(uniform_open0(rng)) * mean_gap_ps;
    if (t >= end_ps) break;
    out.push_back({t, t, Origin::dark, -1});
  }
}

std::vector<Candidate> apply_dead_time(std::span<const Candidate> sorted, double dead_time_ps) {
  std::vector<Candidate> kept;
  DeadTime dead(dead_time_ps);
  for (const auto& c : sorted) {
    if (!dead.live_at(c.time_ps)) continue;
    dead.fire(c.time_ps);
    kept.push_back(c);
  }
  return kept;
}

std::vector<ClickRecord> detect(std::span<const PhotonArrival> arrivals,
                                const DetectorModel& model, Rng& rng,
                                const Timeline& timeline, Timestamp span_begin,
                                Timestamp span_end, DetectorId id) {
  if (model.mode != DetectorMode::free_running) {
    throw DomainError("detect: triggered detectors need gates; use GatedDetector");
  }
  auto cands = photon_candidates(arrivals, model, rng, timeline);
  const auto n_photon = static_cast<std::ptrdiff_t>(cands.size());
  add_dark_candidates(cands, model.dark_rate_hz, timeline.to_ps(span_begin),
                      timeline.to_ps(span_end), rng);
  // Both halves are sorted; merge instead of a full sort.
  std::inplace_merge(cands.begin(), cands.begin() + n_photon, cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.time_ps < b.time_ps; });

  const auto kept = apply_dead_time(cands, model.dead_time_s * 1e12);
  std::vector<ClickRecord> clicks;
  clicks.reserve(kept.size());
  for (const auto& c : kept) {
    const Timestamp t = timeline.to_stamp(c.time_ps);
    clicks.push_back({id, t.pulse, t.offset_ps, c.origin, c.source_pulse});
  }
  return clicks;
}

//---------------------------------------------------------------------------//
GatedDetector::GatedDetector(const DetectorModel& model, std::vector<Candidate> sorted_candidates)
    : model_(model), candidates_(std::move(sorted_candidates)), dead_(model.dead_time_s * 1e12) {}

std::optional<Candidate> GatedDetector::fire(double open_ps, Rng& rng) {
  if (!dead_.live_at(open_ps)) return std::nullopt;
  ++gates_;
  const double close_ps = open_ps + model_.gate_window_ps;

  while (cursor_ < candidates_.size() && candidates_[cursor_].time_ps < open_ps) ++cursor_;

  std::optional<Candidate> click;
  bool photon = false;
  if (cursor_ < candidates_.size() && candidates_[cursor_].time_ps <= close_ps) {
    click = candidates_[cursor_];
    photon = true;
  }
  if (model_.dark_prob_per_gate > 0.0 && bernoulli(rng, model_.dark_prob_per_gate)) {
    const double t = open_ps + uniform01(rng) * model_.gate_window_ps;
    if (!click || t < click->time_ps) {
      click = Candidate{t, t, Origin::dark, -1};
      photon = false;
    }
  }
  // A detected photon is absorbed; it cannot click again in a later gate.
  if (photon) ++cursor_;
  if (click) dead_.fire(click->time_ps);
  return click;
}

}  // namespace hsps
