// Spectral profiles of the kernel families.
//
// A pair acts on the spectrum as factor1(t, |zeta|) * factor2(s, |eta|),
// zeta = (xi, eta) the full frequency and eta its second-factor part.
#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "flagwave/lattice.hpp"
#include "flagwave/scale_grid.hpp"

namespace flagwave {

enum class KernelKind { kLittlewoodPaley, kPoisson, kHeat, kHeatLP, kIndicator };
enum class Calibration { kAnalytic, kDiscretelyRenormalized };

// kTelescoping: m(r)^2 = S(1 - |log2 r|) / ln 2 with S the smooth step built
// from exp(-1/x). Sums over whole octave shifts telescope to one, so dyadic
// sampling reproduces exactly. kBump: c * exp(-1 / (1 - log2(r)^2)).
enum class LpProfile { kTelescoping, kBump };

class KernelPair {
 public:
  KernelKind kind() const { return kind_; }
  Calibration calibration() const { return calibration_; }
  LpProfile lp_profile() const { return lp_profile_; }

  double profile1(double r) const;
  double profile2(double rho) const;

  // Scaled factors. Indicator pairs are unnormalized, so they carry t^(n+m)
  // and s^m in front of the profile.
  double factor1(double t, double r) const;
  double factor2(double s, double rho) const;

  std::string name() const;

  friend KernelPair build_lp_pair(Calibration, LpProfile);
  friend KernelPair build_poisson_pair();
  friend KernelPair build_heat_pair();
  friend KernelPair build_heatlp_pair(Calibration);
  friend KernelPair build_indicator_pair(int, int);

 private:
  KernelKind kind_ = KernelKind::kPoisson;
  Calibration calibration_ = Calibration::kAnalytic;
  LpProfile lp_profile_ = LpProfile::kTelescoping;
  int dim1_ = 2;
  int dim2_ = 1;
};

KernelPair build_lp_pair(Calibration calibration,
                         LpProfile profile = LpProfile::kTelescoping);
KernelPair build_poisson_pair();
KernelPair build_heat_pair();
KernelPair build_heatlp_pair(Calibration calibration = Calibration::kAnalytic);
KernelPair build_indicator_pair(int n, int m);

double lp_profile_value(LpProfile profile, double r);
double smooth_step(double x);

// Fourier transform of the unit-ball indicator in R^d at radius r.
double ball_indicator_transform(int d, double r);
double unit_ball_volume(int d);

// Physical-space samples of the unnormalized indicators: the ball of radius t
// in R^(n+m), and its partial convolution in y with the ball of radius s in
// R^m. Distances are periodic and measured between cell corners.
GridFunction indicator_ball(const LatticeSpec& lattice, double t);
GridFunction indicator_flag(const LatticeSpec& lattice, double t, double s);

struct SpectralCalibration {
  double c = 8.0;
  double psi(double s) const { return c * s * s * std::exp(-s * s); }
};

SpectralCalibration build_spectral_calibration();

// Composite Gauss-Legendre quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 64);

// int_0^inf m(t)^2 dt/t, evaluated over the support in the log variable.
double analytic_calibration_integral(LpProfile profile);

// (-i zeta_j/|zeta|)(-i eta_k/|eta|) for j in 1..n+m, k in 1..m. Zero on
// eta = 0 and on Nyquist planes of the two axes involved.
RealVector build_riesz_multiplier(const LatticeSpec& lattice, int j, int k);

const char* kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& s);
const char* calibration_name(Calibration c);
Calibration parse_calibration(const std::string& s);

}  // namespace flagwave
