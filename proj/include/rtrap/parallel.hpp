#pragma once

#include <cstddef>
#include <functional>

namespace rtrap {

/// Worker threads available to the library: hardware concurrency capped by RT_THREADS.
unsigned worker_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are disjoint,
/// so bodies writing only to their own slots give results independent of scheduling.
/// Work below minPerThread items per worker stays on the calling thread.
void parallel_for(std::size_t n, std::size_t minPerThread,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace rtrap
