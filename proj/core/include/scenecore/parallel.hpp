// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace scenecore {

/// Worker count used by parallel_for: min(hardware_concurrency, SC_THREADS).
/// SC_THREADS=1 forces sequential execution.
std::size_t worker_count();

/// Runs fn(begin, end) over disjoint chunks of [0, n), possibly from several
/// threads. Callers must only write to disjoint state per index so the result
/// is identical to the sequential loop.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace scenecore
