#pragma once

#include <cstddef>
#include <functional>

namespace brackets::parallel {

// Worker count: BRACKETS_THREADS env var if set, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count).  Work is handed out by index, so results
// must be written to caller-owned per-index slots; any reduction the caller
// performs afterwards in index order is deterministic regardless of the
// worker count.  The first exception thrown by a body is rethrown here.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace brackets::parallel
