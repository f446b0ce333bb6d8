// Square functions: g_F, the Lusin area integral S_F, the Poisson area
// integral S_F(u) and the heat area function.
#pragma once

#include <string>

#include "flagwave/flagconv.hpp"
#include "flagwave/kernels.hpp"

namespace flagwave {

enum class SquareKind { kGF, kSF, kSFu, kSHeat };

struct SquareFunctionResult {
  GridFunction value;
  SquareKind kind;
  ScaleGrid grid;
  std::string kernel;
};

const char* square_kind_name(SquareKind k);

// Mass of the unnormalized flag indicator at (t, s), divided by t^(n+m) s^m:
// the product of the unit-ball volumes in R^(n+m) and R^m.
double flag_indicator_constant(const LatticeSpec& lattice);

SquareFunctionResult g_F(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid);

// The indicator weight is spread evenly over the cone rectangle, so each
// scale contributes (indicator constant) * (rectangle mean of |block|^2).
SquareFunctionResult S_F(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid);

GridFunction poisson_extension(const GridFunction& f, double t, double s);

SquareFunctionResult S_F_u(const GridFunction& f, const ScaleGrid& grid);

SquareFunctionResult S_heat(const GridFunction& f, const ScaleGrid& grid);

// Spectral symbol of t d_alpha s d_beta P_t P_s for one component, as a real
// array plus a flag saying whether the symbol is i times that array.
// alpha = 0 is d/dt, alpha = a >= 1 is the a-th spatial axis; beta = 0 is
// d/ds, beta = b >= 1 is the b-th y axis.
bool poisson_gradient_symbol(const LatticeSpec& lattice, double t, double s, int alpha,
                             int beta, std::span<double> out);

}  // namespace flagwave
