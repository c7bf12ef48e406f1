#pragma once

#include <cstddef>
#include <functional>

namespace sinklab {

// Worker count from SINKLAB_THREADS (default: hardware concurrency, at least 1).
int thread_count();

// Runs body(i) for i in [0, n) on thread_count() threads. Each index is
// handled exactly once; results must be written to per-index slots so the
// output does not depend on the schedule. The first exception is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace sinklab
