// Copyright 2026 The hsps authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace hsps {

//! Worker count for `requested` threads (0 = all hardware threads), capped
//! by the HSPS_SIM_THREADS environment variable when it is set.
unsigned worker_count(unsigned requested = 0);

//! Runs fn(0..n-1) on up to `threads` workers. Tasks are claimed in index
//! order; the first exception thrown by a task is rethrown after all
//! workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace hsps
