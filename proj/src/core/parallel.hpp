#pragma once

#include <cstddef>
#include <functional>

namespace recho {

// Worker count: hardware concurrency capped by RUPTURE_ECHO_THREADS.
std::size_t worker_count();

// Runs fn(begin, end) over a contiguous partition of [0, n) on the worker
// pool. Chunks write disjoint outputs, so results are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace recho
