#include <gtest/gtest.h>

#include <cmath>

#include "flagwave/cone.hpp"
#include "flagwave/square.hpp"
#include "helpers.hpp"

using namespace flagwave;

namespace {

// Brute-force area integral on a 1+1 lattice: every block computed on its
// own, then averaged over the periodic cone window cell by cell.
GridFunction area_oracle(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid) {
  const auto& lat = f.lattice();
  const int N = lat.N;
  const double h = lat.cell_width();
  const double cm = flag_indicator_constant(lat);
  GridFunction acc(lat);
  for (const auto& ts : grid.t_samples())
    for (const auto& ss : grid.s_samples()) {
      auto b = pair.calibration() == Calibration::kDiscretelyRenormalized
                   ? flag_convolve(f, pair, ts.value, ss.value, &grid)
                   : flag_convolve(f, pair, ts.value, ss.value);
      auto offsets = [&](double len) {
        int hw = static_cast<int>(std::floor(len / h * (1.0 + 1e-12)));
        std::vector<int> o;
        if (2 * hw + 1 >= N)
          for (int d = 0; d < N; ++d) o.push_back(d);
        else
          for (int d = -hw; d <= hw; ++d) o.push_back(d);
        return o;
      };
      auto ox = offsets(ts.value), oy = offsets(ts.value + ss.value);
      const double k = ts.weight * ss.weight * cm / (ox.size() * oy.size());
      for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) {
          double e = 0.0;
          for (int dx : ox)
            for (int dy : oy) {
              double v = b[((x + dx + N) % N) * N + (y + dy + N) % N];
              e += v * v;
            }
          acc[x * N + y] += k * e;
        }
    }
  for (double& v : acc.values()) v = std::sqrt(v);
  return acc;
}

}  // namespace

TEST(Square, AreaIntegralsMatchBruteForce) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  auto f = fwtest::random_smooth(lat, 8);
  auto grid = ScaleGrid(-1, 4, -1, 4).bind(lat);
  auto lp = build_lp_pair(Calibration::kDiscretelyRenormalized);
  EXPECT_LT(fwtest::rel_l2(S_F(f, lp, grid).value, area_oracle(f, lp, grid)), 1e-12);
  auto heat = S_heat(f, grid);
  EXPECT_EQ(heat.kind, SquareKind::kSHeat);
  EXPECT_LT(fwtest::rel_l2(heat.value, area_oracle(f, build_heatlp_pair(), grid)), 1e-12);
}

TEST(Square, GFNeedsLittlewoodPaley) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  auto f = fwtest::random_smooth(lat, 9);
  auto grid = ScaleGrid(-1, 4, -1, 4).bind(lat);
  EXPECT_THROW(g_F(f, build_heat_pair(), grid), std::invalid_argument);
  EXPECT_THROW(S_F(f, build_poisson_pair(), grid), std::invalid_argument);
}

// t d/dt s d/ds of the Poisson extension against a central difference.
TEST(Square, PoissonGradientSymbolMatchesFiniteDifferences) {
  auto lat = make_lattice(1, 1, 16, 4.0);
  auto f = fwtest::random_smooth(lat, 10);
  const double t = 0.6, s = 0.3, d = 1e-3;
  auto P = [&](double a, double b) { return poisson_extension(f, a, b); };
  auto pp = P(t + d, s + d), pm = P(t + d, s - d), mp = P(t - d, s + d), mm = P(t - d, s - d);
  RealVector sym(lat.spectral_size());
  bool imag = poisson_gradient_symbol(lat, t, s, 0, 0, sym);
  EXPECT_FALSE(imag);
  SpectralField F = to_spectral(f);
  for (std::size_t q = 0; q < F.size(); ++q) F[q] *= sym[q];
  auto g = to_physical(F);
  GridFunction fd(lat);
  for (std::size_t i = 0; i < fd.size(); ++i)
    fd[i] = t * s * (pp[i] - pm[i] - mp[i] + mm[i]) / (4 * d * d);
  EXPECT_LT(fwtest::rel_l2(fd, g), 1e-5);

  // mixed spatial component: (i t w_x)(i s w_y) P = -(t w_x)(s w_y) P
  auto ft = frequency_table(lat);
  EXPECT_FALSE(poisson_gradient_symbol(lat, t, s, 1, 1, sym));
  for (std::size_t q = 0; q < sym.size(); ++q) {
    if (ft->nyquist[q]) continue;
    double p = std::exp(-t * ft->zeta_norm[q]) * std::exp(-s * ft->eta_norm[q]);
    EXPECT_NEAR(sym[q], -(t * ft->omega(q, 0)) * (s * ft->omega(q, 1)) * p, 1e-13);
  }
  EXPECT_TRUE(poisson_gradient_symbol(lat, t, s, 0, 1, sym));
  EXPECT_THROW(poisson_gradient_symbol(lat, t, s, 3, 0, sym), std::out_of_range);
}

TEST(Square, PoissonAreaIntegralIsPositiveAndScales) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  auto f = fwtest::random_smooth(lat, 11);
  auto grid = ScaleGrid(-1, 4, -1, 4).bind(lat);
  auto a = S_F_u(f, grid).value;
  GridFunction f3(lat);
  for (std::size_t i = 0; i < f.size(); ++i) f3[i] = 3.0 * f[i];
  auto b = S_F_u(f3, grid).value;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_GT(a[i], 0.0);
    EXPECT_NEAR(b[i], 3.0 * a[i], 1e-12 * b[i]);
  }
}
