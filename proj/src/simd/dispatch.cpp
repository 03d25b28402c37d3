#include <atomic>
#include <cstdlib>
#include <string_view>

#include "treesketch/errors.hpp"
#include "treesketch/simd/kernels.hpp"

namespace treesketch::simd {

#if !TREESKETCH_HAVE_AVX2
const Kernels* avx2_kernels() { return nullptr; }
#endif

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
#if TREESKETCH_HAVE_AVX2
  return avx2_kernels() != nullptr && __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels& kernels_for(Backend b) {
  if (!backend_available(b)) throw Error("simd backend not available on this machine");
  return b == Backend::Avx2 ? *avx2_kernels() : scalar_kernels();
}

namespace {

Backend initial_backend() {
  if (const char* env = std::getenv("TREESKETCH_SIMD"); env && std::string_view(env) == "scalar")
    return Backend::Scalar;
  return backend_available(Backend::Avx2) ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& selected() {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

}  // namespace

Backend active_backend() { return selected().load(std::memory_order_relaxed); }

const Kernels& active() { return kernels_for(active_backend()); }

void set_active(Backend b) {
  kernels_for(b);
  selected().store(b, std::memory_order_relaxed);
}

}  // namespace treesketch::simd
