#pragma once

#include <cstddef>
#include <functional>

namespace weyl_lab {

/// Worker count: hardware concurrency capped by WEYL_LAB_THREADS (if set
/// to a positive integer). Always at least 1.
std::size_t worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads using
/// contiguous static chunks. Callers write results into slot i, so output
/// order never depends on scheduling. The first exception thrown by any
/// worker is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace weyl_lab
