// Flag Riesz transforms, the Riesz characterization norm, a heat-integral
// evaluation path, and the conjugate Poisson system check.
#pragma once

#include <vector>

#include "flagwave/lattice.hpp"

namespace flagwave {

// j in 1..n+m, k in 1..m.
GridFunction apply_riesz(const GridFunction& f, int j, int k);
GridFunction apply_riesz_first(const GridFunction& f, int j);   // on R^(n+m)
GridFunction apply_riesz_second(const GridFunction& f, int k);  // on R^m, in y

struct RieszSuite {
  std::vector<GridFunction> transforms;  // (j, k) row-major, j outer
  double riesz_norm = 0.0;
};

RieszSuite riesz_suite(const GridFunction& f);
double riesz_norm(const GridFunction& f);

// int_0^t_max exp(-t r^2) t^(-1/2) dt: composite Simpson in log t with 64
// nodes per decade on [1e-6, t_max] plus the series for (0, 1e-6].
double heat_root_integral(double r, double t_max);

// (1/pi) (i zeta_j Q(|zeta|)) (i eta_k Q(|eta|)) with Q the integral above.
// Throws if exp(-t_max r_min^2) >= 1e-12 for the smallest nonzero radius.
GridFunction riesz_via_heat(const GridFunction& f, int j, int k, double t_max);

// Largest relative L2 residual over both lines of each conjugate system.
double conjugate_system_residual(const GridFunction& f, double t, double s);

}  // namespace flagwave
