#include "flagwave/cone.hpp"

#include <cmath>

#include "flagwave/simd.hpp"

namespace flagwave {

double ConeSection::cell_count() const {
  double c = 1.0;
  for (const auto& a : axes) c *= static_cast<double>(a.length());
  return c;
}

AxisWindow clip_window(std::size_t before, std::size_t after, int N) {
  const std::size_t n = static_cast<std::size_t>(N);
  if (before + after + 1 >= n) return {n / 2, n - n / 2 - 1};
  return {before, after};
}

ConeSection cone_section(const LatticeSpec& lattice, double t, double s) {
  const double h = lattice.cell_width();
  auto cells = [&](double len) {
    return static_cast<std::size_t>(std::floor(len / h * (1.0 + 1e-12)));
  };
  ConeSection c;
  for (int a = 0; a < lattice.dims(); ++a) {
    std::size_t hw = a < lattice.n ? cells(t) : cells(t + s);
    c.axes.push_back(clip_window(hw, hw, lattice.N));
  }
  return c;
}

namespace {

template <typename Op>
void separable(GridFunction& g, const ConeSection& c, Op op) {
  const auto& lat = g.lattice();
  const std::size_t N = static_cast<std::size_t>(lat.N);
  std::size_t outer = 1, inner = lat.size() / N;
  for (int a = 0; a < lat.dims(); ++a) {
    const auto& w = c.axes[a];
    if (w.length() > 1) op(g.values().data(), outer, N, inner, w.before, w.after);
    outer *= N;
    inner /= N;
  }
}

}  // namespace

void window_sum_inplace(GridFunction& g, const ConeSection& c) {
  separable(g, c, simd::active().window_sum);
}

void window_max_inplace(GridFunction& g, const ConeSection& c) {
  separable(g, c, simd::active().window_max);
}

}  // namespace flagwave
