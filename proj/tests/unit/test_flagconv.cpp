#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "flagwave/flagconv.hpp"
#include "flagwave/square.hpp"
#include "helpers.hpp"

using namespace flagwave;

namespace {

LatticeSpec small() { return make_lattice(1, 1, 32, 4.0); }
ScaleGrid covering() { return ScaleGrid(-1, 6, -1, 6).bind(small()); }

}  // namespace

TEST(FlagConv, RenormalizedGFIsAnIsometry) {
  auto lat = small();
  auto grid = covering();
  ASSERT_TRUE(grid.full_coverage());
  auto f = fwtest::random_smooth(lat, 1);
  auto g = g_F(f, build_lp_pair(Calibration::kDiscretelyRenormalized), grid);
  EXPECT_NEAR(fwtest::l2(g.value) / fwtest::l2(f), 1.0, 1e-8);
}

TEST(FlagConv, CalderonReproduces) {
  auto lat = small();
  auto f = fwtest::random_smooth(lat, 2);
  auto lp = build_lp_pair(Calibration::kDiscretelyRenormalized);
  auto rec = calderon_reconstruct(compute_coefficients(f, lp, covering()), lp);
  EXPECT_LT(fwtest::rel_l2(rec, f), 1e-10);

  // analytic telescoping profile: one sample per block against eight
  auto an = build_lp_pair(Calibration::kAnalytic);
  ScaleGrid g1 = ScaleGrid(-1, 6, -1, 6, 1).bind(lat), g8 = ScaleGrid(-1, 6, -1, 6, 8).bind(lat);
  auto r1 = calderon_reconstruct(compute_coefficients(f, an, g1), an);
  auto r8 = calderon_reconstruct(compute_coefficients(f, an, g8), an);
  EXPECT_LT(fwtest::rel_l2(r1, r8), 2e-2);
  EXPECT_LT(fwtest::rel_l2(r8, f), 2e-2);
}

TEST(FlagConv, RenormalizedNeedsCoverage) {
  auto lat = small();
  auto f = fwtest::random_smooth(lat, 3);
  auto lp = build_lp_pair(Calibration::kDiscretelyRenormalized);
  EXPECT_THROW(compute_coefficients(f, lp, ScaleGrid(0, 2, 0, 2).bind(lat)),
               std::invalid_argument);
  EXPECT_THROW(flag_convolve(f, lp, 0.5, 0.5), std::invalid_argument);
  EXPECT_THROW(flag_convolve(f, build_heat_pair(), 0.0, 0.5), std::invalid_argument);
}

// Oracle: periodized Gaussian convolution in physical space. The heat pair
// multiplier exp(-t^2|zeta|^2 - s^2|eta|^2) is a Gaussian of variance 2t^2
// in x and 2(t^2 + s^2) in y.
TEST(FlagConv, HeatMatchesPhysicalConvolution) {
  auto lat = make_lattice(1, 1, 16, 4.0);
  auto f = fwtest::random_smooth(lat, 4);
  const double t = 0.5, s = 0.4, h = lat.cell_width(), L = lat.L;
  const double vx = 2 * t * t, vy = 2 * (t * t + s * s);
  auto kernel = [&](double dx, double dy) {
    double k = 0.0;
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        double x = dx + a * L, y = dy + b * L;
        k += std::exp(-x * x / (2 * vx) - y * y / (2 * vy));
      }
    return k / (2 * std::numbers::pi * std::sqrt(vx * vy));
  };
  auto g = flag_convolve(f, build_heat_pair(), t, s);
  const int N = lat.N;
  double err = 0.0;
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      double v = 0.0;
      for (int u = 0; u < N; ++u)
        for (int w = 0; w < N; ++w) v += kernel((x - u) * h, (y - w) * h) * f[u * N + w];
      err = std::max(err, std::abs(v * h * h - g[x * N + y]));
    }
  EXPECT_LT(err, 1e-10);
}

TEST(FlagConv, CoefficientTableCoversTheGrid) {
  auto lat = small();
  auto f = fwtest::random_smooth(lat, 5);
  auto grid = ScaleGrid(0, 2, 1, 2, 2).bind(lat);
  auto c = compute_coefficients(f, build_heat_pair(), grid);
  EXPECT_EQ(c.blocks.size(), 6u * 4u);
  EXPECT_EQ(c.blocks.front().info.j, 0);
  EXPECT_EQ(c.blocks.back().info.k, 2);
  auto direct = flag_convolve(f, build_heat_pair(), c.blocks[5].info.t, c.blocks[5].info.s);
  EXPECT_LT(fwtest::rel_l2(c.blocks[5].values, direct), 1e-14);
}
