#include "flagwave/flagconv.hpp"

#include <cmath>
#include <stdexcept>

#include "flagwave/simd.hpp"

namespace flagwave {

FilterBank::FilterBank(const KernelPair& pair, const ScaleGrid& grid, const LatticeSpec& lattice)
    : pair_(pair), grid_(grid), lattice_(lattice), t_(grid.t_samples()), s_(grid.s_samples()) {
  auto ft = frequency_table(lattice);
  const std::size_t S = lattice.spectral_size();
  const bool renorm = pair.calibration() == Calibration::kDiscretelyRenormalized;

  auto build = [&](const std::vector<ScaleSample>& smp, const RealVector& radius, bool first,
                   std::vector<RealVector>& out) {
    out.assign(smp.size(), RealVector(S));
    for (std::size_t i = 0; i < smp.size(); ++i)
      for (std::size_t q = 0; q < S; ++q)
        out[i][q] = first ? pair.factor1(smp[i].value, radius[q])
                          : pair.factor2(smp[i].value, radius[q]);
    if (!renorm) return;
    for (std::size_t q = 0; q < S; ++q) {
      double D = 0.0;
      for (std::size_t i = 0; i < smp.size(); ++i) D += smp[i].weight * out[i][q] * out[i][q];
      double inv = D > 0.0 ? 1.0 / std::sqrt(D) : 0.0;
      for (std::size_t i = 0; i < smp.size(); ++i) out[i][q] *= inv;
    }
  };
  build(t_, ft->zeta_norm, true, first_);
  build(s_, ft->eta_norm, false, second_);
}

std::span<const double> FilterBank::first(std::size_t i) const { return first_.at(i); }
std::span<const double> FilterBank::second(std::size_t k) const { return second_.at(k); }

void FilterBank::symbol(std::size_t i, std::size_t k, std::span<double> out) const {
  simd::active().product(out.data(), first_.at(i).data(), second_.at(k).data(), out.size());
}

void for_each_block(const SpectralField& F, const FilterBank& bank,
                    const std::function<void(const BlockInfo&, const GridFunction&)>& fn,
                    bool include_zero) {
  const auto& lat = bank.lattice();
  if (!(F.lattice() == lat)) throw std::invalid_argument("for_each_block: lattice mismatch");
  const std::size_t S = lat.spectral_size();
  const auto& K = simd::active();
  RealVector sym(S);
  ComplexVector buf(S);
  GridFunction block(lat);
  auto coeff = F.coefficients();
  for (std::size_t i = 0; i < bank.t_samples().size(); ++i) {
    for (std::size_t k = 0; k < bank.s_samples().size(); ++k) {
      bank.symbol(i, k, sym);
      K.multiply_real(buf.data(), coeff.data(), sym.data(), S);
      bool zero = true;
      for (const auto& c : buf)
        if (c.real() != 0.0 || c.imag() != 0.0) {
          zero = false;
          break;
        }
      const auto& ts = bank.t_samples()[i];
      const auto& ss = bank.s_samples()[k];
      BlockInfo info{i, k, ts.block, ss.block, ts.value, ss.value, ts.weight * ss.weight};
      if (zero) {
        if (!include_zero) continue;
        std::fill(block.values().begin(), block.values().end(), 0.0);
      } else {
        to_physical_destructive(lat, buf, block);
      }
      fn(info, block);
    }
  }
}

GridFunction flag_convolve(const GridFunction& f, const KernelPair& pair, double t, double s,
                           const ScaleGrid* grid) {
  if (!(t > 0.0) || !(s > 0.0)) throw std::invalid_argument("flag_convolve: nonpositive scale");
  const auto& lat = f.lattice();
  auto ft = frequency_table(lat);
  SpectralField F = to_spectral(f);
  const bool renorm = pair.calibration() == Calibration::kDiscretelyRenormalized;
  if (renorm && !grid)
    throw std::invalid_argument("flag_convolve: renormalized pair needs its scale grid");
  std::vector<ScaleSample> ts, ss;
  if (renorm) {
    ts = grid->t_samples();
    ss = grid->s_samples();
  }
  auto norm = [&](const std::vector<ScaleSample>& smp, double r, bool first) {
    double D = 0.0;
    for (const auto& x : smp) {
      double v = first ? pair.factor1(x.value, r) : pair.factor2(x.value, r);
      D += x.weight * v * v;
    }
    return D > 0.0 ? 1.0 / std::sqrt(D) : 0.0;
  };
  auto c = F.coefficients();
  for (std::size_t q = 0; q < c.size(); ++q) {
    double r = ft->zeta_norm[q], rho = ft->eta_norm[q];
    double a = pair.factor1(t, r), b = pair.factor2(s, rho);
    if (renorm) {
      a *= norm(ts, r, true);
      b *= norm(ss, rho, false);
    }
    c[q] *= a * b;
  }
  return to_physical(F);
}

FlagCoefficients compute_coefficients(const GridFunction& f, const KernelPair& pair,
                                      const ScaleGrid& grid) {
  if (pair.calibration() == Calibration::kDiscretelyRenormalized && !grid.full_coverage())
    throw std::invalid_argument(
        "compute_coefficients: renormalized calibration needs a full-coverage scale grid");
  FilterBank bank(pair, grid, f.lattice());
  SpectralField F = to_spectral(f);
  FlagCoefficients out{grid, pair, f.lattice(), 0.0, {}};
  out.mean = F[0].real() / static_cast<double>(f.lattice().size());
  for_each_block(
      F, bank,
      [&](const BlockInfo& info, const GridFunction& b) { out.blocks.push_back({info, b}); },
      true);
  return out;
}

GridFunction calderon_reconstruct(const FlagCoefficients& coeffs, const KernelPair& pair) {
  if (coeffs.pair.name() != pair.name())
    throw std::invalid_argument("calderon_reconstruct: kernel mismatch");
  const auto& lat = coeffs.lattice;
  FilterBank bank(pair, coeffs.grid, lat);
  const std::size_t S = lat.spectral_size();
  const auto& K = simd::active();
  RealVector sym(S);
  ComplexVector acc(S, 0.0), tmp(S);
  for (const auto& blk : coeffs.blocks) {
    SpectralField B = to_spectral(blk.values);
    bank.symbol(blk.info.ti, blk.info.si, sym);
    K.multiply_real(tmp.data(), B.coefficients().data(), sym.data(), S);
    for (std::size_t q = 0; q < S; ++q) acc[q] += blk.info.weight * tmp[q];
  }
  acc[0] += coeffs.mean * static_cast<double>(lat.size());
  GridFunction out(lat);
  to_physical_destructive(lat, acc, out);
  return out;
}

}  // namespace flagwave
