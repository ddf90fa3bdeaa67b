#pragma once

#include <cstddef>
#include <functional>

namespace gridgram {

/// Worker count from GRIDGRAM_WORKERS, defaulting to the hardware concurrency.
std::size_t worker_count();

/// Runs body(k) for k in [0, count) on up to `workers` threads. Each index is
/// visited exactly once; callers write results to disjoint slots. The first
/// exception thrown by any body is rethrown after all threads join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

}  // namespace gridgram
