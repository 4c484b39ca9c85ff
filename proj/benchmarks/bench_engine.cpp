// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "hsps/random.hpp"
#include "hsps/sampling.hpp"
#include "hsps/simkernel.hpp"

namespace {

void BM_Philox(benchmark::State& state) {
  hsps::Rng rng(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng());
}
BENCHMARK(BM_Philox);

void BM_SkipToNextEvent(benchmark::State& state) {
  hsps::Rng rng(1, 0);
  const double p = 1e-4;
  for (auto _ : state) benchmark::DoNotOptimize(hsps::skip_to_next_event(rng, p));
}
BENCHMARK(BM_SkipToNextEvent);

void BM_SampleEvent(benchmark::State& state) {
  hsps::Rng rng(1, 0);
  const hsps::PulseSampler sampler({8, 4, 0.005}, hsps::PairStatistics::thermal, 1.0);
  hsps::PulsePairs pairs;
  for (auto _ : state) {
    sampler.sample_event(rng, pairs);
    benchmark::DoNotOptimize(pairs.correlated);
  }
}
BENCHMARK(BM_SampleEvent);

// One 1 ms block of the calibrated scenario (1e7 pulses).
void BM_RunBlock(benchmark::State& state) {
  hsps::SimScenario s = hsps::calibrated_scenario();
  s.source.spurious_mode_weight = static_cast<double>(state.range(0));
  s.duration_s = 1e-3;
  std::uint64_t b = 0;
  for (auto _ : state) benchmark::DoNotOptimize(hsps::run_block(s, b++ % s.block_count()));
  state.counters["pulses/s"] = benchmark::Counter(
      static_cast<double>(s.block_size_pulses) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RunBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
