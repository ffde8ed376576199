#include "rtrap/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rtrap {

unsigned worker_count() {
  static const unsigned count = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RT_THREADS")) {
      try {
        const long cap = std::stol(env);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
      } catch (const std::exception&) {
        // ignore malformed values
      }
    }
    return hw;
  }();
  return count;
}

void parallel_for(std::size_t n, std::size_t minPerThread,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, minPerThread)));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::exception_ptr failure;
  std::mutex failureLock;
  auto guarded = [&](std::size_t b, std::size_t e) {
    try {
      body(b, e);
    } catch (...) {
      std::lock_guard lock(failureLock);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
      const std::size_t b = w * chunk;
      const std::size_t e = std::min(n, b + chunk);
      if (b >= e) break;
      pool.emplace_back(guarded, b, e);
    }
    guarded(0, std::min(n, chunk));
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rtrap
