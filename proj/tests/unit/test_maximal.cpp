#include <gtest/gtest.h>

#include <cmath>

#include "flagwave/maximal.hpp"
#include "helpers.hpp"

using namespace flagwave;

namespace {

// Largest mean of |f| over periodic boxes of the given sides (in cells)
// that contain each cell, on a 1+1 lattice.
void box_oracle(const GridFunction& f, int wx, int wy, GridFunction& out) {
  const int N = f.lattice().N;
  for (int px = 0; px < N; ++px)
    for (int py = 0; py < N; ++py) {
      double s = 0.0;
      for (int a = 0; a < wx; ++a)
        for (int b = 0; b < wy; ++b) s += std::abs(f[((px + a) % N) * N + (py + b) % N]);
      s /= wx * wy;
      for (int a = 0; a < wx; ++a)
        for (int b = 0; b < wy; ++b) {
          double& o = out[((px + a) % N) * N + (py + b) % N];
          o = std::max(o, s);
        }
    }
}

}  // namespace

// Oracle: scan every cone cell of the same blocks. Maxima are exact, so the
// results agree bit for bit.
TEST(Maximal, NonTangentialMatchesConeScan) {
  auto lat = make_lattice(1, 1, 32, 4.0);
  auto f = fwtest::random_smooth(lat, 12);
  auto grid = ScaleGrid(-1, 3, 0, 3).bind(lat);
  const int N = lat.N;
  const double h = lat.cell_width();
  for (auto pair : {build_heat_pair(), build_poisson_pair()}) {
    GridFunction want(lat), rad(lat);
    FilterBank bank(pair, grid, lat);
    for_each_block(to_spectral(f), bank, [&](const BlockInfo& info, const GridFunction& b) {
      int hx = static_cast<int>(std::floor(info.t / h * (1 + 1e-12)));
      int hy = static_cast<int>(std::floor((info.t + info.s) / h * (1 + 1e-12)));
      hx = std::min(hx, N / 2);
      hy = std::min(hy, N / 2);
      for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) {
          rad[x * N + y] = std::max(rad[x * N + y], std::abs(b[x * N + y]));
          double m = 0.0;
          for (int dx = -hx; dx <= hx; ++dx)
            for (int dy = -hy; dy <= hy; ++dy)
              m = std::max(m, std::abs(b[((x + dx + N) % N) * N + (y + dy + N) % N]));
          want[x * N + y] = std::max(want[x * N + y], m);
        }
    });
    auto got = maximal_pair(f, pair, grid);
    for (std::size_t i = 0; i < want.size(); ++i) {
      ASSERT_EQ(got.nontangential.value[i], want[i]);
      ASSERT_EQ(got.radial.value[i], rad[i]);
      ASSERT_LE(got.radial.value[i], got.nontangential.value[i]);
    }
    auto r = radial_max(f, pair, grid).value;
    for (std::size_t i = 0; i < r.size(); ++i) ASSERT_EQ(r[i], got.radial.value[i]);
  }
  EXPECT_THROW(radial_max(f, build_lp_pair(Calibration::kAnalytic), grid),
               std::invalid_argument);
}

TEST(Maximal, StrongMaximalMatchesBoxScan) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  auto f = fwtest::random_smooth(lat, 13);
  GridFunction want(lat);
  for (int a = 1; a <= 16; a *= 2)
    for (int b = 1; b <= 16; b *= 2) box_oracle(f, a, b, want);
  auto got = strong_max(f).value;
  for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-13);
}

TEST(Maximal, SuperlevelMatchesBoxScan) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  std::vector<std::uint8_t> mask(lat.size(), 0);
  for (int x = 3; x < 7; ++x)
    for (int y = 10; y < 13; ++y) mask[x * 16 + y] = 1;
  mask[15 * 16 + 0] = 1;
  GridFunction g(lat);
  for (std::size_t i = 0; i < mask.size(); ++i) g[i] = mask[i];
  for (double thr : {0.1, 0.5, 0.9}) {
    GridFunction m(lat);
    for (int a = 1; a <= 16; a *= 2)
      for (int b = 1; b <= 16; b *= 2) box_oracle(g, a, b, m);
    auto got = strong_max_superlevel(lat, mask, thr);
    for (std::size_t i = 0; i < mask.size(); ++i) ASSERT_EQ(got[i], m[i] > thr ? 1 : 0) << i;
  }
  EXPECT_THROW(strong_max_superlevel(lat, std::vector<std::uint8_t>(3), 0.5),
               std::invalid_argument);
}

TEST(Maximal, FlagMaximalMatchesBoxScan) {
  auto lat = make_lattice(1, 1, 16, 2.0);
  auto f = fwtest::random_smooth(lat, 14);
  auto grid = ScaleGrid(-1, 3, -1, 3).bind(lat);
  const double h = lat.cell_width();
  auto cells = [&](double len) {
    return static_cast<int>(std::clamp<long>(std::lround(len / h), 1, lat.N));
  };
  GridFunction want(lat);
  for (const auto& ts : grid.t_samples())
    for (const auto& ss : grid.s_samples())
      box_oracle(f, cells(ts.value), cells(ts.value + ss.value), want);
  auto got = flag_max(f, grid).value;
  for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-13);
}
