#include "rtrap/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace rtrap::kernels {

#if defined(RTRAP_WITH_AVX2)
const Dispatch& avx2_table();
#endif

const Dispatch* avx2() {
#if defined(RTRAP_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Dispatch* pick_default() {
  if (const char* env = std::getenv("RTRAP_SIMD")) {
    if (std::string(env) == "scalar") return &scalar();
  }
  if (const Dispatch* d = avx2()) return d;
  return &scalar();
}

std::atomic<const Dispatch*>& current() {
  static std::atomic<const Dispatch*> ptr{pick_default()};
  return ptr;
}

}  // namespace

const Dispatch& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
  if (name == "scalar") {
    current().store(&scalar());
    return true;
  }
  if (name == "avx2") {
    const Dispatch* d = avx2();
    if (!d) return false;
    current().store(d);
    return true;
  }
  if (name == "auto") {
    current().store(pick_default());
    return true;
  }
  return false;
}

}  // namespace rtrap::kernels
