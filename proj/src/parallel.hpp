#pragma once

#include <cstddef>
#include <functional>

namespace mixmi::detail {

/// Worker count: MIXMI_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Runs fn(i) for i in [0, n). Calls nested inside another parallel_for run
/// serially on the calling thread. The first exception thrown by any call is
/// rethrown after all workers finish. Callers write results into per-index
/// slots, so output does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace mixmi::detail
