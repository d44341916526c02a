#pragma once

#include <cstddef>
#include <functional>

namespace nlmc {

// Worker count: NLMC_THREADS if set (minimum 1), otherwise hardware_concurrency.
int thread_budget();

// Runs f(i) for i in [0, n).  Work is split into contiguous blocks; results
// must be written to per-index slots so the outcome is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace nlmc
