#include <algorithm>
#include <vector>

#include "flagwave/simd.hpp"
#include "lines.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace flagwave::simd {

#if defined(__AVX2__)

namespace {

void multiply_real(std::complex<double>* out, const std::complex<double>* in,
                   const double* m, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m128d mm = _mm_loadu_pd(m + i);
    // (m0, m0, m1, m1) against (re0, im0, re1, im1)
    __m256d md = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
    __m256d v = _mm256_loadu_pd(src + 2 * i);
    _mm256_storeu_pd(dst + 2 * i, _mm256_mul_pd(v, md));
  }
  for (; i < n; ++i) {
    double re = in[i].real() * m[i];
    double im = in[i].imag() * m[i];
    out[i] = {re, im};
  }
}

void multiply_imag(std::complex<double>* out, const std::complex<double>* in,
                   const double* m, std::size_t n) {
  const double* src = reinterpret_cast<const double*>(in);
  double* dst = reinterpret_cast<double*>(out);
  const __m256d sign = _mm256_set_pd(0.0, -0.0, 0.0, -0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m128d mm = _mm_loadu_pd(m + i);
    __m256d md = _mm256_permute4x64_pd(_mm256_castpd128_pd256(mm), 0x50);
    __m256d v = _mm256_loadu_pd(src + 2 * i);
    __m256d sw = _mm256_permute_pd(v, 0x5);  // (im0, re0, im1, re1)
    __m256d p = _mm256_mul_pd(sw, md);
    _mm256_storeu_pd(dst + 2 * i, _mm256_xor_pd(p, sign));
  }
  for (; i < n; ++i) {
    double re = -(in[i].imag() * m[i]);
    double im = in[i].real() * m[i];
    out[i] = {re, im};
  }
}

void product(double* out, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void accumulate_square(double* acc, const double* x, double w, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    __m256d sq = _mm256_mul_pd(v, v);
    __m256d a = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(a, _mm256_mul_pd(wv, sq)));
  }
  for (; i < n; ++i) {
    double sq = x[i] * x[i];
    acc[i] = acc[i] + w * sq;
  }
}

void accumulate_abs_max(double* acc, const double* x, std::size_t n) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_and_pd(_mm256_loadu_pd(x + i), mask);
    __m256d a = _mm256_loadu_pd(acc + i);
    // max(a, v) picks v only when a < v, as std::max does.
    _mm256_storeu_pd(acc + i, _mm256_max_pd(v, a));
  }
  for (; i < n; ++i) acc[i] = std::max(acc[i], x[i] < 0 ? -x[i] : x[i]);
}

// Four lines are packed side by side, one per vector lane, and filtered
// together. Lines are enumerated in (outer, inner) order; leftovers go
// through the scalar line routine.
template <typename LaneFn, typename LineFn>
void for_line_groups(double* data, std::size_t outer, std::size_t len, std::size_t inner,
                     LaneFn lanes, LineFn line) {
  const std::size_t total = outer * inner;
  std::vector<double> pack(4 * len);
  std::vector<double> scratch;
  auto base_of = [&](std::size_t l) {
    return data + (l / inner) * len * inner + (l % inner);
  };
  std::size_t l = 0;
  for (; l + 4 <= total; l += 4) {
    double* b[4] = {base_of(l), base_of(l + 1), base_of(l + 2), base_of(l + 3)};
    for (std::size_t i = 0; i < len; ++i)
      for (int k = 0; k < 4; ++k) pack[4 * i + k] = b[k][i * inner];
    lanes(pack.data());
    for (std::size_t i = 0; i < len; ++i)
      for (int k = 0; k < 4; ++k) b[k][i * inner] = pack[4 * i + k];
  }
  for (; l < total; ++l) line(base_of(l), scratch);
}

// van Herk / Gil-Werman: block prefix and suffix maxima of width w.
void window_max(double* data, std::size_t outer, std::size_t len, std::size_t inner,
                std::size_t before, std::size_t after) {
  const std::size_t w = before + after + 1;
  const std::size_t ne = len + w - 1;
  std::vector<__m256d> ext(ne), g(ne), h(ne);
  auto lanes = [&](double* p) {
    for (std::size_t k = 0; k < ne; ++k)
      ext[k] = _mm256_loadu_pd(p + 4 * ((k + len - before) % len));
    for (std::size_t k = 0; k < ne; ++k)
      g[k] = (k % w == 0) ? ext[k] : _mm256_max_pd(g[k - 1], ext[k]);
    for (std::size_t k = ne; k-- > 0;)
      h[k] = (k % w == w - 1 || k == ne - 1) ? ext[k] : _mm256_max_pd(h[k + 1], ext[k]);
    for (std::size_t i = 0; i < len; ++i)
      _mm256_storeu_pd(p + 4 * i, _mm256_max_pd(h[i], g[i + w - 1]));
  };
  auto line = [&](double* b, std::vector<double>& s) {
    detail::window_max_line(b, len, inner, before, after, s);
  };
  for_line_groups(data, outer, len, inner, lanes, line);
}

void window_sum(double* data, std::size_t outer, std::size_t len, std::size_t inner,
                std::size_t before, std::size_t after) {
  std::vector<__m256d> line_v(len);
  auto lanes = [&](double* p) {
    for (std::size_t i = 0; i < len; ++i) line_v[i] = _mm256_loadu_pd(p + 4 * i);
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < before + after + 1; ++k)
      s = _mm256_add_pd(s, line_v[(k + len - before) % len]);
    _mm256_storeu_pd(p, s);
    for (std::size_t i = 1; i < len; ++i) {
      s = _mm256_add_pd(s, line_v[(i + after) % len]);
      s = _mm256_sub_pd(s, line_v[(i + len - before - 1) % len]);
      _mm256_storeu_pd(p + 4 * i, s);
    }
  };
  auto line = [&](double* b, std::vector<double>& s) {
    detail::window_sum_line(b, len, inner, before, after, s);
  };
  for_line_groups(data, outer, len, inner, lanes, line);
}

}  // namespace

const Kernels& avx2_kernels() {
  if (!cpu_has_avx2()) return scalar_kernels();
  static const Kernels k{Isa::kAvx2,       multiply_real,      multiply_imag, product,
                         accumulate_square, accumulate_abs_max, window_max,    window_sum};
  return k;
}

#else

const Kernels& avx2_kernels() { return scalar_kernels(); }

#endif

}  // namespace flagwave::simd
