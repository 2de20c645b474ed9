#pragma once

#include <cstddef>
#include <functional>

namespace optomech {

/// Number of workers used by parallel_for: OPTOMECH_THREADS if set, else
/// the hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls fn(i) for every i in [0, n) on a pool of worker threads.  Callers
/// write results into slot i, so assembly order never depends on
/// scheduling.  The first exception thrown by fn is rethrown here.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace optomech
