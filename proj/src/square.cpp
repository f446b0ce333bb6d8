#include "flagwave/square.hpp"

#include <cmath>
#include <stdexcept>

#include "flagwave/cone.hpp"
#include "flagwave/simd.hpp"

namespace flagwave {

const char* square_kind_name(SquareKind k) {
  switch (k) {
    case SquareKind::kGF:
      return "gF";
    case SquareKind::kSF:
      return "SF";
    case SquareKind::kSFu:
      return "SFu";
    case SquareKind::kSHeat:
      return "SHeat";
  }
  return "?";
}

double flag_indicator_constant(const LatticeSpec& lattice) {
  return unit_ball_volume(lattice.dims()) * unit_ball_volume(lattice.m);
}

namespace {

void require_lp(const KernelPair& pair) {
  if (pair.kind() != KernelKind::kLittlewoodPaley)
    throw std::invalid_argument("square function: Littlewood-Paley pair required");
}

void finish_sqrt(GridFunction& acc) {
  for (double& v : acc.values()) v = std::sqrt(std::max(v, 0.0));
}

// acc += scale * (window mean of energy); energy is overwritten.
void add_area_term(GridFunction& energy, double t, double s, double scale, GridFunction& acc) {
  ConeSection c = cone_section(energy.lattice(), t, s);
  window_sum_inplace(energy, c);
  // running sums can leave tiny negative residues
  for (double& v : energy.values()) v = std::max(v, 0.0);
  const double k = scale / c.cell_count();
  auto e = energy.values();
  auto a = acc.values();
  for (std::size_t i = 0; i < e.size(); ++i) a[i] = a[i] + k * e[i];
}

SquareFunctionResult area_integral(const GridFunction& f, const KernelPair& pair,
                                   const ScaleGrid& grid, SquareKind kind) {
  const auto& lat = f.lattice();
  FilterBank bank(pair, grid, lat);
  SpectralField F = to_spectral(f);
  const double cm = flag_indicator_constant(lat);
  GridFunction acc(lat), energy(lat);
  const auto& K = simd::active();
  for_each_block(F, bank, [&](const BlockInfo& info, const GridFunction& b) {
    std::fill(energy.values().begin(), energy.values().end(), 0.0);
    K.accumulate_square(energy.values().data(), b.values().data(), 1.0, b.size());
    add_area_term(energy, info.t, info.s, info.weight * cm, acc);
  });
  finish_sqrt(acc);
  return {std::move(acc), kind, grid, pair.name()};
}

}  // namespace

SquareFunctionResult g_F(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid) {
  require_lp(pair);
  const auto& lat = f.lattice();
  FilterBank bank(pair, grid, lat);
  SpectralField F = to_spectral(f);
  GridFunction acc(lat);
  const auto& K = simd::active();
  for_each_block(F, bank, [&](const BlockInfo& info, const GridFunction& b) {
    K.accumulate_square(acc.values().data(), b.values().data(), info.weight, b.size());
  });
  finish_sqrt(acc);
  return {std::move(acc), SquareKind::kGF, grid, pair.name()};
}

SquareFunctionResult S_F(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid) {
  require_lp(pair);
  return area_integral(f, pair, grid, SquareKind::kSF);
}

GridFunction poisson_extension(const GridFunction& f, double t, double s) {
  return flag_convolve(f, build_poisson_pair(), t, s);
}

bool poisson_gradient_symbol(const LatticeSpec& lattice, double t, double s, int alpha,
                             int beta, std::span<double> out) {
  if (alpha < 0 || alpha > lattice.dims() || beta < 0 || beta > lattice.m)
    throw std::out_of_range("poisson_gradient_symbol: component out of range");
  auto ft = frequency_table(lattice);
  const int ax = alpha - 1, by = lattice.n + beta - 1;
  int imag_factors = (alpha > 0) + (beta > 0);
  for (std::size_t q = 0; q < out.size(); ++q) {
    double r = ft->zeta_norm[q], rho = ft->eta_norm[q];
    double p = std::exp(-t * r) * std::exp(-s * rho);
    double a, b;
    if (alpha == 0) a = -t * r;
    else a = (ft->nyquist[q] >> ax & 1u) ? 0.0 : t * ft->omega(q, ax);
    if (beta == 0) b = -s * rho;
    else b = (ft->nyquist[q] >> by & 1u) ? 0.0 : s * ft->omega(q, by);
    double v = a * b * p;
    out[q] = imag_factors == 2 ? -v : v;
  }
  return imag_factors == 1;
}

SquareFunctionResult S_F_u(const GridFunction& f, const ScaleGrid& grid) {
  const auto& lat = f.lattice();
  SpectralField F = to_spectral(f);
  const std::size_t S = lat.spectral_size();
  const double cm = flag_indicator_constant(lat);
  const auto& K = simd::active();
  GridFunction acc(lat), energy(lat), comp(lat);
  RealVector sym(S);
  ComplexVector buf(S);
  for (const auto& ts : grid.t_samples()) {
    for (const auto& ss : grid.s_samples()) {
      std::fill(energy.values().begin(), energy.values().end(), 0.0);
      for (int alpha = 0; alpha <= lat.dims(); ++alpha) {
        for (int beta = 0; beta <= lat.m; ++beta) {
          bool imag = poisson_gradient_symbol(lat, ts.value, ss.value, alpha, beta, sym);
          if (imag) K.multiply_imag(buf.data(), F.coefficients().data(), sym.data(), S);
          else K.multiply_real(buf.data(), F.coefficients().data(), sym.data(), S);
          to_physical_destructive(lat, buf, comp);
          K.accumulate_square(energy.values().data(), comp.values().data(), 1.0, comp.size());
        }
      }
      add_area_term(energy, ts.value, ss.value, ts.weight * ss.weight * cm, acc);
    }
  }
  finish_sqrt(acc);
  return {std::move(acc), SquareKind::kSFu, grid, "Poisson/gradient"};
}

SquareFunctionResult S_heat(const GridFunction& f, const ScaleGrid& grid) {
  return area_integral(f, build_heatlp_pair(), grid, SquareKind::kSHeat);
}

}  // namespace flagwave
