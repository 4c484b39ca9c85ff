// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/simkernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hsps/error.hpp"
#include "hsps/parallel.hpp"
#include "hsps/random.hpp"
#include "hsps/sampling.hpp"

namespace hsps {
namespace {

void check(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(field, std::string(field) + ": " + what);
}

Origin classify(const Candidate& click, std::int64_t herald_source) {
  if (click.origin == Origin::dark) return Origin::dark;
  if (click.origin == Origin::photon_correlated && herald_source >= 0 &&
      click.source_pulse == herald_source) {
    return Origin::photon_correlated;
  }
  return Origin::photon_uncorrelated;
}

ClickRecord make_record(DetectorId id, const Candidate& c, Origin origin,
                        const Timeline& timeline) {
  const Timestamp t = timeline.to_stamp(c.time_ps);
  return {id, t.pulse, t.offset_ps, origin, c.source_pulse};
}

// Pulse-train margins around a block, in pulses.
struct Margins {
  std::uint64_t warmup = 0;
  std::uint64_t lookahead = 0;
};

Margins block_margins(const SimScenario& s) {
  const double period = s.source.pulse_period_ps();
  const double max_sigma = std::max({s.sspd.jitter_sigma_ps(), s.apd1.jitter_sigma_ps(),
                                     s.apd2.jitter_sigma_ps()});
  const double reach_ps =
      std::abs(s.tac1_offset_ps) + std::max(s.tac1_window_ps, s.apd1.gate_window_ps) +
      std::abs(s.tac2_offset_ps) + std::max(s.tac2_window_ps, s.apd2.gate_window_ps) +
      12.0 * max_sigma;
  const double dead_ps =
      1e12 * std::max({s.sspd.dead_time_s, s.apd1.dead_time_s, s.apd2.dead_time_s});
  Margins m;
  m.lookahead = static_cast<std::uint64_t>(std::ceil(reach_ps / period)) + 8;
  m.warmup = static_cast<std::uint64_t>(std::ceil(dead_ps / period)) + m.lookahead;
  return m;
}

}  // namespace

//---------------------------------------------------------------------------//
std::uint64_t SimScenario::total_pulses() const {
  return static_cast<std::uint64_t>(std::llround(duration_s * source.rep_rate_hz));
}

std::uint64_t SimScenario::block_count() const {
  const auto n = total_pulses();
  return (n + block_size_pulses - 1) / block_size_pulses;
}

void validate(const SimScenario& s) {
  validate(s.source);
  validate(s.sspd, "sspd");
  validate(s.apd1, "apd1");
  validate(s.apd2, "apd2");
  validate(s.modes);
  check(s.sspd.mode == DetectorMode::free_running, "sspd.mode",
        "the heralding detector must be free_running");
  check(s.apd1.mode == DetectorMode::triggered, "apd1.mode", "HBT detectors must be triggered");
  check(s.apd2.mode == DetectorMode::triggered, "apd2.mode", "HBT detectors must be triggered");
  check(std::isfinite(s.duration_s) && s.duration_s > 0.0, "run.duration", "must be > 0");
  check(s.total_pulses() >= 1, "run.duration", "shorter than one pump period");
  check(s.tac1_window_ps >= 0.0 && std::isfinite(s.tac1_window_ps), "tac.apd1_window_ps",
        "must be >= 0");
  check(s.tac2_window_ps >= 0.0 && std::isfinite(s.tac2_window_ps), "tac.apd2_window_ps",
        "must be >= 0");
  check(std::isfinite(s.tac1_offset_ps), "tac.apd1_offset_ps", "must be finite");
  check(std::isfinite(s.tac2_offset_ps), "tac.apd2_offset_ps", "must be finite");
  check(s.block_size_pulses >= 1, "run.block_size_pulses", "must be >= 1");
}

SimScenario calibrated_scenario() {
  SimScenario s;
  s.modes.mu_per_mode = source_mean_pairs(s.source);
  const auto counts = mode_counts(s.source.heralded_bw_ghz, s.source.heralding_bw_ghz,
                                  s.tac2_window_ps, s.source.pulse_period_ps());
  s.modes.n_spectral = counts.spectral;
  s.modes.n_temporal = counts.temporal;
  return s;
}

SimScenario single_mode_scenario(double mu, PairStatistics statistics,
                                 double herald_transmission) {
  SimScenario s;
  s.source.statistics = statistics;
  s.source.gamma = 1.0;
  s.source.signal_loss_db = transmission_to_db(herald_transmission);
  s.source.signal_excess_loss_db = 0.0;
  s.source.idler_loss_db = 0.0;
  s.source.idler_excess_loss_db = 0.0;
  s.source.spurious_mode_weight = 0.0;

  DetectorModel ideal;
  ideal.efficiency = 1.0;
  s.sspd = ideal;
  ideal.mode = DetectorMode::triggered;
  const double period = s.source.pulse_period_ps();
  ideal.gate_window_ps = period;
  s.apd1 = ideal;
  s.apd2 = ideal;
  s.tac1_window_ps = period;
  s.tac2_window_ps = period;
  s.tac1_offset_ps = -period / 2;
  s.tac2_offset_ps = -period / 2;
  s.modes = ModeStructure{1, 1, mu};
  return s;
}

//---------------------------------------------------------------------------//
void OriginCounts::add(Origin o) {
  switch (o) {
    case Origin::photon_correlated: ++correlated; break;
    case Origin::photon_uncorrelated: ++uncorrelated; break;
    case Origin::dark: ++dark; break;
  }
}

OriginCounts& OriginCounts::operator+=(const OriginCounts& o) {
  correlated += o.correlated;
  uncorrelated += o.uncorrelated;
  dark += o.dark;
  return *this;
}

CountingTotals& CountingTotals::operator+=(const CountingTotals& o) {
  pulses += o.pulses;
  heralds += o.heralds;
  s1_counts += o.s1_counts;
  s2_counts += o.s2_counts;
  duration_s += o.duration_s;
  sspd_busy_s += o.sspd_busy_s;
  apd1_busy_s += o.apd1_busy_s;
  apd2_busy_s += o.apd2_busy_s;
  apd1_gates += o.apd1_gates;
  apd2_gates += o.apd2_gates;
  herald_origin += o.herald_origin;
  s1_origin += o.s1_origin;
  s2_origin += o.s2_origin;
  return *this;
}

void check_invariants(const CountingTotals& t) {
  auto fail = [](const char* what) { throw InvariantError(what); };
  if (t.s2_counts > t.s1_counts) fail("s2_counts exceeds s1_counts");
  if (t.s1_counts > t.heralds) fail("s1_counts exceeds heralds");
  if (t.herald_origin.total() != t.heralds) fail("herald origin breakdown does not sum");
  if (t.s1_origin.total() != t.s1_counts) fail("APD1 origin breakdown does not sum");
  if (t.s2_origin.total() != t.s2_counts) fail("APD2 origin breakdown does not sum");
  const double slack = 1e-9 * std::max(1.0, t.duration_s);
  if (t.sspd_busy_s > t.duration_s + slack || t.apd1_busy_s > t.duration_s + slack ||
      t.apd2_busy_s > t.duration_s + slack) {
    fail("detector busy time exceeds run duration");
  }
}

//---------------------------------------------------------------------------//
CountingTotals run_block(const SimScenario& s, std::uint64_t block_index,
                         std::vector<ClickRecord>* clicks) {
  const std::uint64_t total = s.total_pulses();
  const std::uint64_t start = block_index * s.block_size_pulses;
  if (start >= total) return {};
  const std::uint64_t end = std::min(total, start + s.block_size_pulses);
  const Margins margins = block_margins(s);
  const std::uint64_t gen_start = start > margins.warmup ? start - margins.warmup : 0;
  const std::uint64_t gen_end = end + margins.lookahead;

  const double period = s.source.pulse_period_ps();
  const Timeline timeline(period, static_cast<std::int64_t>(gen_start));
  const double start_ps = timeline.slot_ps(static_cast<std::int64_t>(start));
  const double end_ps = timeline.slot_ps(static_cast<std::int64_t>(end));

  Rng rng(s.seed, block_index);

  // Pair generation and transport to the three detector inputs.
  const std::array<double, 2> signal_path{s.source.gamma, s.source.signal_transmission()};
  const std::array<double, 2> idler_path{s.source.gamma, s.source.idler_transmission()};
  std::vector<PhotonArrival> signal, idler1, idler2;

  const PulseSampler sampler(s.modes, s.source.statistics, s.source.spurious_mode_weight);
  const double p_event = sampler.event_probability();
  if (p_event > 0.0) {
    PulsePairs pairs;
    auto route_idler = [&](std::uint32_t n, Origin origin, std::int64_t pulse) {
      const std::uint32_t survivors = transport(n, idler_path, rng);
      for (std::uint32_t i = 0; i < survivors; ++i) {
        auto& arm = bernoulli(rng, 0.5) ? idler1 : idler2;
        arm.push_back({{pulse, 0.0}, origin, pulse});
      }
    };
    std::uint64_t pulse = gen_start;
    for (pulse += skip_to_next_event(rng, p_event) - 1; pulse < gen_end;
         pulse += skip_to_next_event(rng, p_event)) {
      sampler.sample_event(rng, pairs);
      const auto k = static_cast<std::int64_t>(pulse);
      const std::uint32_t heralding = transport(pairs.correlated, signal_path, rng);
      for (std::uint32_t i = 0; i < heralding; ++i) {
        signal.push_back({{k, 0.0}, Origin::photon_correlated, k});
      }
      route_idler(pairs.correlated, Origin::photon_correlated, k);
      for (std::uint32_t n : pairs.uncorrelated) {
        if (n > 0) route_idler(n, Origin::photon_uncorrelated, k);
      }
    }
  }

  // Heralding detector (free running).
  auto sspd = photon_candidates(signal, s.sspd, rng, timeline);
  const auto n_photon = static_cast<std::ptrdiff_t>(sspd.size());
  add_dark_candidates(sspd, s.sspd.dark_rate_hz, 0.0,
                      timeline.slot_ps(static_cast<std::int64_t>(gen_end)), rng);
  std::inplace_merge(sspd.begin(), sspd.begin() + n_photon, sspd.end(),
                     [](const Candidate& a, const Candidate& b) { return a.time_ps < b.time_ps; });
  const auto heralds = apply_dead_time(sspd, s.sspd.dead_time_s * 1e12);

  GatedDetector apd1(s.apd1, photon_candidates(idler1, s.apd1, rng, timeline));
  GatedDetector apd2(s.apd2, photon_candidates(idler2, s.apd2, rng, timeline));

  CountingTotals t;
  t.pulses = end - start;
  t.duration_s = static_cast<double>(t.pulses) / s.source.rep_rate_hz;
  auto busy = [&](double click_ps, double dead_s) {
    return std::clamp(end_ps - click_ps, 0.0, dead_s * 1e12) * 1e-12;
  };

  for (const Candidate& h : heralds) {
    const bool counted = h.time_ps >= start_ps && h.time_ps < end_ps;
    if (counted) {
      ++t.heralds;
      t.herald_origin.add(h.origin);
      t.sspd_busy_s += busy(h.time_ps, s.sspd.dead_time_s);
      if (clicks) clicks->push_back(make_record(DetectorId::sspd, h, h.origin, timeline));
    }

    const double open1 = h.time_ps + s.tac1_offset_ps;
    const std::size_t gates1 = apd1.gates_opened();
    const auto c1 = apd1.fire(open1, rng);
    if (counted) t.apd1_gates += apd1.gates_opened() - gates1;
    if (!c1 || !tac_gate(c1->time_ps, open1, s.tac1_window_ps)) continue;
    if (counted) {
      ++t.s1_counts;
      const Origin o = classify(*c1, h.source_pulse);
      t.s1_origin.add(o);
      t.apd1_busy_s += busy(c1->time_ps, s.apd1.dead_time_s);
      if (clicks) clicks->push_back(make_record(DetectorId::apd1, *c1, o, timeline));
    }

    const double trigger2 = s.apd2_trigger_jitter ? c1->time_ps : c1->arrival_ps;
    const double open2 = trigger2 + s.tac2_offset_ps;
    const std::size_t gates2 = apd2.gates_opened();
    const auto c2 = apd2.fire(open2, rng);
    if (counted) t.apd2_gates += apd2.gates_opened() - gates2;
    if (!c2 || !tac_gate(c2->time_ps, open2, s.tac2_window_ps)) continue;
    if (counted) {
      ++t.s2_counts;
      const Origin o = classify(*c2, h.source_pulse);
      t.s2_origin.add(o);
      t.apd2_busy_s += busy(c2->time_ps, s.apd2.dead_time_s);
      if (clicks) clicks->push_back(make_record(DetectorId::apd2, *c2, o, timeline));
    }
  }
  return t;
}

CountingTotals run(const SimScenario& s, unsigned threads) {
  validate(s);
  const std::uint64_t blocks = s.block_count();
  std::vector<CountingTotals> per_block(blocks);
  parallel_for(blocks, worker_count(threads),
               [&](std::size_t b) { per_block[b] = run_block(s, b); });

  CountingTotals total;
  for (const auto& b : per_block) total += b;
  check_invariants(total);
  return total;
}

}  // namespace hsps
