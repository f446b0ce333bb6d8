// Flag convolution as a product of two spectral multipliers, the dyadic
// coefficient table, and the discrete Calderon reproducing sum.
#pragma once

#include <functional>
#include <vector>

#include "flagwave/kernels.hpp"
#include "flagwave/lattice.hpp"
#include "flagwave/scale_grid.hpp"

namespace flagwave {

// Per-sample spectral factors of a pair on one lattice, including the
// per-frequency renormalization when the pair asks for it.
class FilterBank {
 public:
  FilterBank(const KernelPair& pair, const ScaleGrid& grid, const LatticeSpec& lattice);

  const KernelPair& pair() const { return pair_; }
  const ScaleGrid& grid() const { return grid_; }
  const LatticeSpec& lattice() const { return lattice_; }
  const std::vector<ScaleSample>& t_samples() const { return t_; }
  const std::vector<ScaleSample>& s_samples() const { return s_; }

  std::span<const double> first(std::size_t i) const;
  std::span<const double> second(std::size_t k) const;
  // first(i) * second(k)
  void symbol(std::size_t i, std::size_t k, std::span<double> out) const;

 private:
  KernelPair pair_;
  ScaleGrid grid_;
  LatticeSpec lattice_;
  std::vector<ScaleSample> t_, s_;
  std::vector<RealVector> first_, second_;
};

struct BlockInfo {
  std::size_t ti, si;  // sample indices
  int j, k;            // dyadic blocks
  double t, s;
  double weight;       // w_t * w_s
};

// Calls fn(info, block) for every sample pair in (t, s) order. The block
// buffer is reused between calls. Pairs whose multiplier vanishes on the
// support of f-hat are skipped unless include_zero is set.
void for_each_block(const SpectralField& F, const FilterBank& bank,
                    const std::function<void(const BlockInfo&, const GridFunction&)>& fn,
                    bool include_zero = false);

GridFunction flag_convolve(const GridFunction& f, const KernelPair& pair, double t, double s,
                           const ScaleGrid* grid = nullptr);

struct FlagBlock {
  BlockInfo info;
  GridFunction values;
};

struct FlagCoefficients {
  ScaleGrid grid;
  KernelPair pair;
  LatticeSpec lattice;
  double mean = 0.0;  // zero-frequency part of f, carried through unchanged
  std::vector<FlagBlock> blocks;
};

FlagCoefficients compute_coefficients(const GridFunction& f, const KernelPair& pair,
                                      const ScaleGrid& grid);

GridFunction calderon_reconstruct(const FlagCoefficients& coeffs, const KernelPair& pair);

}  // namespace flagwave
