#pragma once

#include <cstddef>
#include <functional>

namespace decouple {

/// Worker count from DECOUPLE_SIM_THREADS, else hardware concurrency (>= 1).
int default_thread_count();

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Work items are
/// claimed dynamically; callers write results into per-index slots so the
/// outcome never depends on scheduling. The first exception thrown by any
/// item is rethrown after all workers have joined.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace decouple
