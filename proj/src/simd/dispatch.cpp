#include <cstdlib>
#include <cstring>

#include "flagwave/simd.hpp"

namespace flagwave::simd {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Kernels& active() {
  static const Kernels* chosen = [] {
    const char* env = std::getenv("FLAGWAVE_ISA");
    if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    if (cpu_has_avx2()) return &avx2_kernels();
    return &scalar_kernels();
  }();
  return *chosen;
}

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace flagwave::simd
