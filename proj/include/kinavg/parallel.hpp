#pragma once

#include <cstddef>
#include <functional>

namespace kinavg {

// Worker count from KINAVG_THREADS (default 1).
int thread_count();

// Calls body(i) for i in [0, n). Indices are split into contiguous blocks, one
// per worker; callers write results into per-index slots and reduce in index
// order afterwards, so output never depends on the worker count. The first
// exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace kinavg
