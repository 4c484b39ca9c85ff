// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include "hsps/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsps/error.hpp"

namespace hsps {
namespace {

// Inversion from n = 1 for a zero-truncated Poisson draw.
std::uint32_t poisson_from(double mean, double target, std::uint32_t start) {
  double pmf = std::exp(-mean);
  for (std::uint32_t k = 1; k <= start; ++k) pmf *= mean / k;
  double cdf = 0.0;
  std::uint32_t k = start;
  for (; k < 100000; ++k) {
    cdf += pmf;
    if (target < cdf) return k;
    pmf *= mean / (k + 1);
    if (pmf == 0.0 && cdf > 0.0) break;
  }
  return k;
}

}  // namespace

PairNumberLaw::PairNumberLaw(PairStatistics statistics, double mean)
    : statistics_(statistics), mean_(mean) {
  if (!(std::isfinite(mean) && mean >= 0.0)) {
    throw DomainError("PairNumberLaw: mean must be finite and >= 0");
  }
  if (statistics == PairStatistics::thermal) {
    p_zero_ = 1.0 / (1.0 + mean);
    log_ratio_ = mean > 0.0 ? std::log(mean) - std::log1p(mean) : 0.0;
  } else {
    p_zero_ = std::exp(-mean);
    log_ratio_ = 0.0;
  }
}

double PairNumberLaw::pmf(int n) const {
  if (n < 0) return 0.0;
  if (mean_ == 0.0) return n == 0 ? 1.0 : 0.0;
  if (statistics_ == PairStatistics::thermal) {
    return std::exp(n * std::log(mean_) - (n + 1) * std::log1p(mean_));
  }
  return std::exp(n * std::log(mean_) - mean_ - std::lgamma(n + 1.0));
}

std::uint32_t PairNumberLaw::sample(Rng& rng) const {
  if (mean_ == 0.0) return 0;
  if (statistics_ == PairStatistics::thermal) {
    // Geometric on {0, 1, ...} with P(n) = (1 - q) q^n, q = mu / (1 + mu).
    return static_cast<std::uint32_t>(std::floor(std::log(uniform_open0(rng)) / log_ratio_));
  }
  const double u = uniform01(rng);
  if (u < p_zero_) return 0;
  return poisson_from(mean_, u - p_zero_, 1);
}

std::uint32_t PairNumberLaw::sample_nonzero(Rng& rng) const {
  if (mean_ == 0.0) throw DomainError("PairNumberLaw: no non-zero outcome at mean 0");
  if (statistics_ == PairStatistics::thermal) {
    // Memoryless: n | n >= 1 is 1 + an unconditional draw.
    return 1 + static_cast<std::uint32_t>(
                   std::floor(std::log(uniform_open0(rng)) / log_ratio_));
  }
  const double target = uniform01(rng) * -std::expm1(-mean_);
  return poisson_from(mean_, target, 1);
}

//---------------------------------------------------------------------------//
std::uint32_t PulsePairs::idler_total() const {
  return std::accumulate(uncorrelated.begin(), uncorrelated.end(), correlated);
}

bool PulsePairs::empty() const {
  return correlated == 0 &&
         std::all_of(uncorrelated.begin(), uncorrelated.end(), [](auto n) { return n == 0; });
}

PulseSampler::PulseSampler(const ModeStructure& modes, PairStatistics statistics,
                           double spurious_weight)
    : correlated_(statistics, modes.mu_per_mode),
      spurious_(statistics, modes.mu_per_mode * spurious_weight),
      n_spurious_(modes.n_spectral - 1) {
  validate(modes);
  // P(first non-empty mode = j) = (prod_{i<j} q_i)(1 - q_j)
  double none_so_far = 1.0;
  double cdf = 0.0;
  first_cdf_.reserve(modes.n_spectral);
  for (int j = 0; j < modes.n_spectral; ++j) {
    const double q = j == 0 ? correlated_.prob_zero() : spurious_.prob_zero();
    cdf += none_so_far * (1.0 - q);
    first_cdf_.push_back(cdf);
    none_so_far *= q;
  }
  p_event_ = 1.0 - none_so_far;
}

void PulseSampler::sample(Rng& rng, PulsePairs& out) const {
  out.correlated = correlated_.sample(rng);
  out.uncorrelated.resize(n_spurious_);
  for (auto& n : out.uncorrelated) n = spurious_.sample(rng);
}

void PulseSampler::sample_event(Rng& rng, PulsePairs& out) const {
  if (p_event_ <= 0.0) throw DomainError("PulseSampler: pulses never carry pairs");
  const double u = uniform01(rng) * p_event_;
  const auto first = static_cast<int>(
      std::upper_bound(first_cdf_.begin(), first_cdf_.end(), u) - first_cdf_.begin());
  const int j = std::min(first, static_cast<int>(first_cdf_.size()) - 1);

  out.uncorrelated.assign(n_spurious_, 0);
  if (j == 0) {
    out.correlated = correlated_.sample_nonzero(rng);
  } else {
    out.correlated = 0;
    out.uncorrelated[j - 1] = spurious_.sample_nonzero(rng);
  }
  for (int k = j; k < n_spurious_; ++k) out.uncorrelated[k] = spurious_.sample(rng);
}

PulsePairs sample_pulse(Rng& rng, const ModeStructure& modes, PairStatistics statistics,
                        double spurious_weight) {
  PulsePairs out;
  PulseSampler(modes, statistics, spurious_weight).sample(rng, out);
  return out;
}

std::uint64_t skip_to_next_event(Rng& rng, double p_event) {
  if (!(p_event > 0.0 && p_event <= 1.0)) {
    throw DomainError("skip_to_next_event: probability must lie in (0, 1]");
  }
  if (p_event == 1.0) return 1;
  const double gap = std::floor(std::log(uniform_open0(rng)) / std::log1p(-p_event));
  constexpr double kMaxGap = 9.0e18;
  return 1 + static_cast<std::uint64_t>(std::min(gap, kMaxGap));
}

std::uint32_t transport(std::uint32_t n, std::span<const double> transmissions, Rng& rng) {
  std::uint32_t survivors = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    bool alive = true;
    for (double t : transmissions) {
      if (t >= 1.0) continue;
      if (!bernoulli(rng, t)) {
        alive = false;
        break;
      }
    }
    survivors += alive ? 1 : 0;
  }
  return survivors;
}

}  // namespace hsps
