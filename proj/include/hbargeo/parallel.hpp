// parallel.hpp — deterministic index-space parallel_for, capped by HBARGEO_THREADS.
#pragma once

#include <cstddef>
#include <functional>

namespace hbargeo {

// Number of worker threads: min(hardware_concurrency, HBARGEO_THREADS if set).
// Always >= 1.
int thread_budget();

// Runs fn(i) for i in [0, n). Work is split into contiguous blocks; each index
// is processed exactly once and results must be written by index, so the
// output is independent of the thread count and interleaving.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hbargeo
