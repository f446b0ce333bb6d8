// Radial and non-tangential maximal functions of a kernel family, the
// strong maximal function over dyadic-sided rectangles, and the flag
// maximal function.
#pragma once

#include <cstdint>
#include <vector>

#include "flagwave/flagconv.hpp"
#include "flagwave/kernels.hpp"

namespace flagwave {

enum class MaximalKind {
  kRadialKernel,
  kNonTangentialKernel,
  kRadialPoisson,
  kNonTangentialPoisson,
  kStrong,
  kFlag
};

struct MaximalResult {
  GridFunction value;
  MaximalKind kind;
  ScaleGrid grid;
};

// Poisson or Heat (unit-mass Gaussian mollifier) pairs only.
MaximalResult radial_max(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid);
MaximalResult nontangential_max(const GridFunction& f, const KernelPair& pair,
                                const ScaleGrid& grid);

struct MaximalPair {
  MaximalResult radial;
  MaximalResult nontangential;
};

// Both from one pass over the scale blocks.
MaximalPair maximal_pair(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid);

MaximalResult strong_max(const GridFunction& f);

// {M_s(mask) > threshold} for a 0/1 mask. Window sums of 0/1 data are exact.
std::vector<std::uint8_t> strong_max_superlevel(const LatticeSpec& lattice,
                                                const std::vector<std::uint8_t>& mask,
                                                double threshold);

MaximalResult flag_max(const GridFunction& f, const ScaleGrid& grid);

}  // namespace flagwave
