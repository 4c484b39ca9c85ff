// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hsps/model.hpp"
#include "hsps/random.hpp"

namespace hsps {

/// Pair-number law of one mode with a fixed mean.
class PairNumberLaw {
 public:
  PairNumberLaw(PairStatistics statistics, double mean);

  PairStatistics statistics() const { return statistics_; }
  double mean() const { return mean_; }
  double pmf(int n) const;
  double prob_zero() const { return p_zero_; }

  std::uint32_t sample(Rng& rng) const;
  //! Draw conditioned on at least one pair.
  std::uint32_t sample_nonzero(Rng& rng) const;

 private:
  PairStatistics statistics_;
  double mean_;
  double p_zero_;
  double log_ratio_;  // thermal: log(mu / (1 + mu))
};

/// Pair counts produced by one pump pulse.
struct PulsePairs {
  //! Mode whose signal twin lies in the heralding band.
  std::uint32_t correlated = 0;
  //! The N_f - 1 idler-band modes whose twins are filtered out.
  std::vector<std::uint32_t> uncorrelated;

  std::uint32_t idler_total() const;
  bool empty() const;
};

/*!
 * Per-pulse multimode pair generator.
 *
 * The correlated mode has mean mu; each of the N_f - 1 spurious modes has
 * mean `spurious_weight * mu`. `sample_event` draws the same joint law
 * conditioned on at least one pair, which together with
 * skip_to_next_event reproduces pulse-by-pulse sampling.
 */
class PulseSampler {
 public:
  PulseSampler(const ModeStructure& modes, PairStatistics statistics,
               double spurious_weight = 1.0);

  //! Probability that a pulse carries at least one pair in any mode.
  double event_probability() const { return p_event_; }

  void sample(Rng& rng, PulsePairs& out) const;
  void sample_event(Rng& rng, PulsePairs& out) const;

 private:
  PairNumberLaw correlated_;
  PairNumberLaw spurious_;
  int n_spurious_;
  double p_event_;
  //! cumulative P(first non-empty mode <= j), mode 0 = correlated
  std::vector<double> first_cdf_;
};

//! Unconditional pair counts of one pulse.
PulsePairs sample_pulse(Rng& rng, const ModeStructure& modes, PairStatistics statistics,
                        double spurious_weight = 1.0);

//! Pulses until the next event of a per-pulse Bernoulli(p) process (>= 1).
std::uint64_t skip_to_next_event(Rng& rng, double p_event);

//! Photons out of `n` that survive every stage (independent thinning).
std::uint32_t transport(std::uint32_t n, std::span<const double> transmissions, Rng& rng);

}  // namespace hsps
