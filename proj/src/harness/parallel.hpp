// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dmimo Authors. Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <functional>

namespace dmimo
{

// Worker count: DMIMO_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Runs body(i) for i in [0, n) on a pool of stateless workers. Results must be
// written to per-index slots. If any call throws, the exception of the lowest
// failing index is rethrown after all workers stop, so failures do not depend
// on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body, std::size_t workers = 0);

} // namespace dmimo
