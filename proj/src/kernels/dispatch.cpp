#include <cstdlib>
#include <cstring>

#include "circlekit/kernels.hpp"

namespace circlekit::kernels {

#if defined(CIRCLEKIT_HAVE_AVX2)
const Ops* avx2_ops_impl();
#endif

const Ops* avx2_ops() {
#if defined(CIRCLEKIT_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_ops_impl() : nullptr;
#else
  return nullptr;
#endif
}

const Ops& active_ops() {
  static const Ops* chosen = [] {
    const char* isa = std::getenv("CIRCLEKIT_ISA");
    if (isa != nullptr && std::strcmp(isa, "scalar") == 0) return &scalar_ops();
    const Ops* v = avx2_ops();
    return v != nullptr ? v : &scalar_ops();
  }();
  return *chosen;
}

}  // namespace circlekit::kernels
