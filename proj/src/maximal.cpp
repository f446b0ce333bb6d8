#include "flagwave/maximal.hpp"

#include <cmath>
#include <stdexcept>

#include "flagwave/cone.hpp"
#include "flagwave/simd.hpp"

namespace flagwave {

namespace {

bool is_poisson(const KernelPair& pair) {
  if (pair.kind() == KernelKind::kPoisson) return true;
  if (pair.kind() == KernelKind::kHeat) return false;
  throw std::invalid_argument("maximal function: Poisson or Heat pair required");
}

int dyadic_levels(int N) {
  int a = 0;
  while ((2 << a) <= N) ++a;
  return a;  // largest a with 2^a <= N
}

// For each cell, the largest mean of |g| over axis-parallel boxes with the
// given side lengths (in cells) that contain the cell.
void box_mean_max(const GridFunction& absg, const std::vector<std::size_t>& sides,
                  GridFunction& work, GridFunction& out) {
  const auto& lat = absg.lattice();
  std::copy(absg.values().begin(), absg.values().end(), work.values().begin());
  ConeSection anchor, cover;
  double count = 1.0;
  for (std::size_t w : sides) {
    anchor.axes.push_back(clip_window(0, w - 1, lat.N));
    cover.axes.push_back(clip_window(w - 1, 0, lat.N));
    count *= static_cast<double>(anchor.axes.back().length());
  }
  // anchor p holds the sum over [p, p + w)
  window_sum_inplace(work, anchor);
  for (double& v : work.values()) v = std::max(v, 0.0) / count;
  window_max_inplace(work, cover);
  auto o = out.values();
  auto w = work.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::max(o[i], w[i]);
}

std::vector<std::size_t> rect_sides(const LatticeSpec& lat, std::size_t x, std::size_t y) {
  std::vector<std::size_t> s;
  for (int a = 0; a < lat.dims(); ++a) s.push_back(a < lat.n ? x : y);
  return s;
}

GridFunction abs_of(const GridFunction& f) {
  GridFunction g(f.lattice());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = std::abs(f[i]);
  return g;
}

}  // namespace

MaximalPair maximal_pair(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid) {
  const bool poisson = is_poisson(pair);
  const auto& lat = f.lattice();
  FilterBank bank(pair, grid, lat);
  SpectralField F = to_spectral(f);
  GridFunction rad(lat), nt(lat), work(lat);
  const auto& K = simd::active();
  for_each_block(F, bank, [&](const BlockInfo& info, const GridFunction& b) {
    K.accumulate_abs_max(rad.values().data(), b.values().data(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i) work[i] = std::abs(b[i]);
    window_max_inplace(work, cone_section(lat, info.t, info.s));
    K.accumulate_abs_max(nt.values().data(), work.values().data(), work.size());
  });
  return {{std::move(rad), poisson ? MaximalKind::kRadialPoisson : MaximalKind::kRadialKernel, grid},
          {std::move(nt),
           poisson ? MaximalKind::kNonTangentialPoisson : MaximalKind::kNonTangentialKernel, grid}};
}

MaximalResult radial_max(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid) {
  const bool poisson = is_poisson(pair);
  const auto& lat = f.lattice();
  FilterBank bank(pair, grid, lat);
  SpectralField F = to_spectral(f);
  GridFunction rad(lat);
  const auto& K = simd::active();
  for_each_block(F, bank, [&](const BlockInfo&, const GridFunction& b) {
    K.accumulate_abs_max(rad.values().data(), b.values().data(), b.size());
  });
  return {std::move(rad), poisson ? MaximalKind::kRadialPoisson : MaximalKind::kRadialKernel, grid};
}

MaximalResult nontangential_max(const GridFunction& f, const KernelPair& pair,
                                const ScaleGrid& grid) {
  return maximal_pair(f, pair, grid).nontangential;
}

MaximalResult strong_max(const GridFunction& f) {
  const auto& lat = f.lattice();
  GridFunction g = abs_of(f), work(lat), out(lat);
  const int levels = dyadic_levels(lat.N);
  for (int a = 0; a <= levels; ++a)
    for (int b = 0; b <= levels; ++b)
      box_mean_max(g, rect_sides(lat, std::size_t{1} << a, std::size_t{1} << b), work, out);
  return {std::move(out), MaximalKind::kStrong, ScaleGrid()};
}

std::vector<std::uint8_t> strong_max_superlevel(const LatticeSpec& lattice,
                                                const std::vector<std::uint8_t>& mask,
                                                double threshold) {
  if (mask.size() != lattice.size()) throw std::invalid_argument("superlevel: mask shape");
  GridFunction g(lattice), work(lattice), hit(lattice);
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i] ? 1.0 : 0.0;
  const int levels = dyadic_levels(lattice.N);
  for (int a = 0; a <= levels; ++a) {
    for (int b = 0; b <= levels; ++b) {
      auto sides = rect_sides(lattice, std::size_t{1} << a, std::size_t{1} << b);
      std::copy(g.values().begin(), g.values().end(), work.values().begin());
      ConeSection anchor, cover;
      double area = 1.0;
      for (std::size_t w : sides) {
        anchor.axes.push_back(clip_window(0, w - 1, lattice.N));
        cover.axes.push_back(clip_window(w - 1, 0, lattice.N));
        area *= static_cast<double>(anchor.axes.back().length());
      }
      window_sum_inplace(work, anchor);
      bool any = false;
      for (double& v : work.values()) {
        v = v > threshold * area ? 1.0 : 0.0;
        any = any || v > 0.0;
      }
      if (!any) continue;
      window_max_inplace(work, cover);
      for (std::size_t i = 0; i < work.size(); ++i) hit[i] = std::max(hit[i], work[i]);
    }
  }
  std::vector<std::uint8_t> out(mask.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = hit[i] > 0.0;
  return out;
}

MaximalResult flag_max(const GridFunction& f, const ScaleGrid& grid) {
  const auto& lat = f.lattice();
  GridFunction g = abs_of(f), work(lat), out(lat);
  const double h = lat.cell_width();
  auto cells = [&](double len) {
    long c = std::lround(len / h);
    return static_cast<std::size_t>(std::clamp<long>(c, 1, lat.N));
  };
  for (const auto& ts : grid.t_samples())
    for (const auto& ss : grid.s_samples())
      box_mean_max(g, rect_sides(lat, cells(ts.value), cells(ts.value + ss.value)), work, out);
  return {std::move(out), MaximalKind::kFlag, grid};
}

}  // namespace flagwave
