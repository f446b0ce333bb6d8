// Data-parallel inner loops. A scalar reference and an AVX2 variant of each
// kernel are built; the AVX2 table is picked at runtime when the CPU has it.
// Neither path uses fused multiply-add, so both round identically and the
// results agree bit for bit.
//
// Window kernels treat the data as [outer][len][inner] and filter along the
// middle axis with periodic wraparound. Output i sees indices i-before ..
// i+after (mod len).
#pragma once

#include <complex>
#include <cstddef>

namespace flagwave::simd {

enum class Isa { kScalar, kAvx2 };

struct Kernels {
  Isa isa;
  // out[i] = in[i] * m[i]
  void (*multiply_real)(std::complex<double>* out, const std::complex<double>* in,
                        const double* m, std::size_t n);
  // out[i] = in[i] * (i * m[i])
  void (*multiply_imag)(std::complex<double>* out, const std::complex<double>* in,
                        const double* m, std::size_t n);
  // out[i] = a[i] * b[i]
  void (*product)(double* out, const double* a, const double* b, std::size_t n);
  // acc[i] += w * (x[i] * x[i])
  void (*accumulate_square)(double* acc, const double* x, double w, std::size_t n);
  // acc[i] = max(acc[i], |x[i]|)
  void (*accumulate_abs_max)(double* acc, const double* x, std::size_t n);
  // in-place periodic sliding maximum; requires before + after + 1 <= len
  void (*window_max)(double* data, std::size_t outer, std::size_t len,
                     std::size_t inner, std::size_t before, std::size_t after);
  // in-place periodic sliding sum; requires before + after + 1 <= len
  void (*window_sum)(double* data, std::size_t outer, std::size_t len,
                     std::size_t inner, std::size_t before, std::size_t after);
};

const Kernels& scalar_kernels();
const Kernels& avx2_kernels();  // falls back to scalar if not compiled in
bool cpu_has_avx2();

// The table in use. FLAGWAVE_ISA=scalar in the environment forces scalar.
const Kernels& active();
const char* isa_name(Isa isa);

}  // namespace flagwave::simd
