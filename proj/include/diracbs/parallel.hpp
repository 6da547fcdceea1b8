#pragma once

#include <cstddef>
#include <functional>

namespace diracbs {

/// Runs body(i) for i in [0, count) on up to `threads` worker threads
/// (threads <= 1 runs inline). Indices are handed out in order; the first
/// exception thrown by any body is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

/// Worker count for a requested value: 0 means hardware concurrency.
int resolve_threads(int requested);

} // namespace diracbs
