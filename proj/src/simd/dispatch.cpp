#include <atomic>
#include <cstdlib>
#include <string>

#include "sketchgraph/simd/kernels.hpp"

namespace sketchgraph::simd {

#ifdef SKETCHGRAPH_HAVE_AVX2
const Kernels& avx2_table();
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
  case Isa::scalar: return "scalar";
  case Isa::avx2: return "avx2";
  }
  return "unknown";
}

const Kernels* avx2_kernels() {
#ifdef SKETCHGRAPH_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* select_default() {
  if (const char* env = std::getenv("SKETCHGRAPH_ISA")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return avx2_kernels();
  }
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> table{select_default()};
  return table;
}

} // namespace

const Kernels& active() { return *current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
  const Kernels* k = isa == Isa::scalar ? &scalar_kernels() : avx2_kernels();
  if (!k) return false;
  current().store(k, std::memory_order_relaxed);
  return true;
}

} // namespace sketchgraph::simd
