#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "flagwave/lattice.hpp"

namespace fwtest {

using flagwave::GridFunction;
using flagwave::LatticeSpec;

// Smooth random real function: a few modes with eta != 0 and no Nyquist
// content, built directly from cosines.
inline GridFunction random_smooth(const LatticeSpec& lat, unsigned seed, int band = 3) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> qd(-band, band);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  GridFunction f(lat);
  std::vector<int> c(lat.dims());
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int mode = 0; mode < 6; ++mode) {
    std::vector<int> q(lat.dims());
    bool eta = false;
    for (int a = 0; a < lat.dims(); ++a) {
      q[a] = qd(rng);
      if (a >= lat.n && q[a] != 0) eta = true;
    }
    if (!eta) q[lat.n] = 1;
    double amp = ud(rng), phase = 3.0 * ud(rng);
    for (std::size_t i = 0; i < f.size(); ++i) {
      flagwave::unravel(lat, i, c);
      double arg = phase;
      for (int a = 0; a < lat.dims(); ++a) arg += two_pi * q[a] * c[a] / lat.N;
      f[i] += amp * std::cos(arg);
    }
  }
  return f;
}

inline double rel_l2(const GridFunction& a, const GridFunction& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

inline double l2(const GridFunction& f) {
  double e = 0.0;
  for (double v : f.values()) e += v * v;
  return std::sqrt(e * f.lattice().cell_volume());
}

}  // namespace fwtest
