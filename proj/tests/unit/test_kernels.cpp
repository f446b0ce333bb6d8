#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "flagwave/kernels.hpp"
#include "flagwave/scale_grid.hpp"

using namespace flagwave;

// Octave sums of the telescoping profile are exactly one.
TEST(Kernels, TelescopingProfileSumsToOne) {
  for (double r : {0.013, 0.7, 1.0, 1.5, 2.0, 3.3, 47.0, 1000.1}) {
    double s = 0.0;
    for (int j = -20; j <= 30; ++j) {
      double m = lp_profile_value(LpProfile::kTelescoping, std::ldexp(r, -j));
      s += std::numbers::ln2 * m * m;
    }
    EXPECT_NEAR(s, 1.0, 1e-14) << r;
  }
}

TEST(Kernels, CalibrationIntegralsAreOne) {
  using boost::math::quadrature::gauss_kronrod;
  for (auto p : {LpProfile::kTelescoping, LpProfile::kBump}) {
    EXPECT_NEAR(analytic_calibration_integral(p), 1.0, 1e-10);
    // independent quadrature of int m(t)^2 dt/t
    auto f = [p](double t) {
      double m = lp_profile_value(p, t);
      return m * m / t;
    };
    double I = gauss_kronrod<double, 61>::integrate(f, 0.5, 2.0, 12, 1e-13);
    EXPECT_NEAR(I, 1.0, 1e-9);
  }
  auto cal = build_spectral_calibration();
  EXPECT_NEAR(cal.c, 8.0, 1e-10);
  // int psi(t) * t^2 exp(-t^2) dt/t = 1
  auto g = [&](double t) { return cal.psi(t) * t * std::exp(-t * t); };
  EXPECT_NEAR((gauss_kronrod<double, 61>::integrate(g, 0.0, 20.0, 12, 1e-14)), 1.0, 1e-10);
}

TEST(Kernels, ProfilesAndFactors) {
  auto lp = build_lp_pair(Calibration::kAnalytic);
  EXPECT_EQ(lp.profile1(0.5), 0.0);
  EXPECT_EQ(lp.profile1(2.0), 0.0);
  EXPECT_NEAR(lp.profile1(1.0), 1.0 / std::sqrt(std::numbers::ln2), 1e-15);
  auto po = build_poisson_pair();
  EXPECT_DOUBLE_EQ(po.factor1(0.5, 2.0), std::exp(-1.0));
  auto he = build_heat_pair();
  EXPECT_DOUBLE_EQ(he.factor2(2.0, 0.5), std::exp(-1.0));
  auto hl = build_heatlp_pair();
  EXPECT_DOUBLE_EQ(hl.profile1(1.0), std::exp(-1.0));
  EXPECT_THROW(build_indicator_pair(0, 1), std::invalid_argument);
  EXPECT_EQ(parse_kernel_kind(kernel_kind_name(KernelKind::kHeatLP)), KernelKind::kHeatLP);
  EXPECT_EQ(parse_calibration("DiscretelyRenormalized"), Calibration::kDiscretelyRenormalized);
  EXPECT_THROW(parse_kernel_kind("Gabor"), std::invalid_argument);
}

// Oracle: the transform of the unit ball evaluated by radial quadrature.
TEST(Kernels, BallTransformMatchesQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  for (double r : {0.0, 0.3, 1.7, 5.2}) {
    double d1 = gauss_kronrod<double, 61>::integrate(
        [r](double x) { return 2.0 * std::cos(r * x); }, 0.0, 1.0, 10, 1e-14);
    EXPECT_NEAR(ball_indicator_transform(1, r), d1, 1e-12);
    double d2 = gauss_kronrod<double, 61>::integrate(
        [r](double p) { return 2.0 * std::numbers::pi * p * std::cyl_bessel_j(0.0, r * p); }, 0.0,
        1.0, 10, 1e-14);
    EXPECT_NEAR(ball_indicator_transform(2, r), d2, 1e-12);
    double d3 = gauss_kronrod<double, 61>::integrate(
        [r](double p) {
          double s = r * p < 1e-8 ? 1.0 : std::sin(r * p) / (r * p);
          return 4.0 * std::numbers::pi * p * p * s;
        },
        0.0, 1.0, 10, 1e-14);
    EXPECT_NEAR(ball_indicator_transform(3, r), d3, 1e-12);
  }
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * std::numbers::pi / 3.0, 1e-14);
}

TEST(Kernels, IndicatorFlagMassMatchesItsSymbolAtZero) {
  auto lat = make_lattice(1, 1, 256, 8.0);
  const double t = 1.0, s = 0.75;
  auto g = indicator_flag(lat, t, s);
  double mass = 0.0;
  for (double v : g.values()) mass += v;
  mass *= lat.cell_volume();
  auto pair = build_indicator_pair(1, 1);
  double symbol0 = pair.factor1(t, 0.0) * pair.factor2(s, 0.0);
  EXPECT_NEAR(mass, symbol0, 0.02 * symbol0);  // lattice point count in the ball
}

TEST(Kernels, RieszMultiplierConvention) {
  auto lat = make_lattice(1, 1, 8, 2.0);
  auto ft = frequency_table(lat);
  auto m = build_riesz_multiplier(lat, 1, 1);
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (ft->eta_norm[q] == 0.0 || ft->nyquist[q]) {
      EXPECT_EQ(m[q], 0.0);
      continue;
    }
    double want = -ft->omega(q, 0) * ft->omega(q, 1) / (ft->zeta_norm[q] * ft->eta_norm[q]);
    EXPECT_NEAR(m[q], want, 1e-15);
  }
  EXPECT_THROW(build_riesz_multiplier(lat, 3, 1), std::out_of_range);
  EXPECT_THROW(build_riesz_multiplier(lat, 1, 2), std::out_of_range);
}

TEST(ScaleGrid, SamplesAndCoverage) {
  ScaleGrid g(-1, 2, 0, 1, 2);
  auto ts = g.t_samples();
  ASSERT_EQ(ts.size(), 8u);
  EXPECT_NEAR(ts[0].value, std::exp2(1.0 + 0.5 - 0.25), 1e-15);
  EXPECT_NEAR(ts[0].weight, std::numbers::ln2 / 2.0, 1e-16);
  EXPECT_THROW(ScaleGrid(3, 2, 0, 1), std::invalid_argument);
  EXPECT_TRUE(ScaleGrid(-2, 7, -2, 7).bind(make_lattice(1, 1, 256, 16.0)).full_coverage());
  EXPECT_FALSE(ScaleGrid(0, 3, 0, 3).bind(make_lattice(1, 1, 256, 16.0)).full_coverage());
}
