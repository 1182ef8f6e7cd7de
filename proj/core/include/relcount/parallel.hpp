#pragma once

#include <cstddef>
#include <functional>

namespace relcount {

// Worker count: GCC_NUM_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Calls fn(begin, end) on disjoint chunks of [0, n), one chunk per worker.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace relcount
