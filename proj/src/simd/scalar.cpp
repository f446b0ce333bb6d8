#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "flagwave/simd.hpp"
#include "lines.hpp"

namespace flagwave::simd {

namespace detail {

// Monotone deque over the periodically extended line.
void window_max_line(double* base, std::size_t len, std::size_t stride,
                     std::size_t before, std::size_t after,
                     std::vector<double>& scratch) {
  const std::size_t w = before + after + 1;
  const std::size_t ne = len + w - 1;
  scratch.resize(ne + len);
  double* ext = scratch.data();
  double* res = ext + ne;
  for (std::size_t k = 0; k < ne; ++k) ext[k] = base[((k + len - before) % len) * stride];
  std::deque<std::size_t> dq;
  for (std::size_t k = 0; k < ne; ++k) {
    while (!dq.empty() && ext[dq.back()] <= ext[k]) dq.pop_back();
    dq.push_back(k);
    if (dq.front() + w <= k) dq.pop_front();
    if (k + 1 >= w) res[k + 1 - w] = ext[dq.front()];
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = res[i];
}

void window_sum_line(double* base, std::size_t len, std::size_t stride,
                     std::size_t before, std::size_t after,
                     std::vector<double>& scratch) {
  scratch.resize(2 * len);
  double* line = scratch.data();
  double* res = line + len;
  for (std::size_t i = 0; i < len; ++i) line[i] = base[i * stride];
  double s = 0.0;
  for (std::size_t k = 0; k < before + after + 1; ++k) s = s + line[(k + len - before) % len];
  res[0] = s;
  for (std::size_t i = 1; i < len; ++i) {
    s = s + line[(i + after) % len];
    s = s - line[(i + len - before - 1) % len];
    res[i] = s;
  }
  for (std::size_t i = 0; i < len; ++i) base[i * stride] = res[i];
}

}  // namespace detail

namespace {

void multiply_real(std::complex<double>* out, const std::complex<double>* in,
                   const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double re = in[i].real() * m[i];
    double im = in[i].imag() * m[i];
    out[i] = {re, im};
  }
}

void multiply_imag(std::complex<double>* out, const std::complex<double>* in,
                   const double* m, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double re = -(in[i].imag() * m[i]);
    double im = in[i].real() * m[i];
    out[i] = {re, im};
  }
}

void product(double* out, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void accumulate_square(double* acc, const double* x, double w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double sq = x[i] * x[i];
    acc[i] = acc[i] + w * sq;
  }
}

void accumulate_abs_max(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = std::max(acc[i], std::fabs(x[i]));
}

void window_max(double* data, std::size_t outer, std::size_t len, std::size_t inner,
                std::size_t before, std::size_t after) {
  std::vector<double> scratch;
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t c = 0; c < inner; ++c)
      detail::window_max_line(data + o * len * inner + c, len, inner, before, after, scratch);
}

void window_sum(double* data, std::size_t outer, std::size_t len, std::size_t inner,
                std::size_t before, std::size_t after) {
  std::vector<double> scratch;
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t c = 0; c < inner; ++c)
      detail::window_sum_line(data + o * len * inner + c, len, inner, before, after, scratch);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::kScalar,     multiply_real,      multiply_imag, product,
                         accumulate_square, accumulate_abs_max, window_max,    window_sum};
  return k;
}

}  // namespace flagwave::simd
