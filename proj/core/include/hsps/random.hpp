// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hsps {

/*!
 * Philox4x32-10 counter-based generator.
 *
 * The 64-bit key is the run seed and the upper 64 counter bits select the
 * stream, so stream `k` of seed `s` is reproducible without generating
 * streams 0..k-1. Each stream holds 2^64 blocks of four 32-bit words.
 * Satisfies UniformRandomBitGenerator with 64-bit output.
 */
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  //! Ten-round bijection of one counter block under `key`.
  static Counter block(Counter ctr, Key key);

 private:
  void refill();

  Key key_;
  Counter ctr_;
  Counter out_{};
  int next_ = 4;
};

using Rng = Philox4x32;

//! Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

//! Uniform double in (0, 1]; safe as a logarithm argument.
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace hsps
