#include "flagwave/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flagwave {

namespace {

constexpr int kGaussPoints = 16;

struct GaussRule {
  std::array<double, kGaussPoints> x{}, w{};
};

const GaussRule& gauss_rule() {
  static const GaussRule rule = [] {
    GaussRule g;
    const int n = kGaussPoints;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      g.x[i] = x;
      g.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
  }();
  return rule;
}

double bump_raw(double u) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

double bump_constant() {
  static const double c = [] {
    double I = integrate([](double u) { double b = bump_raw(u); return b * b; }, -1.0, 1.0, 256);
    return 1.0 / std::sqrt(std::numbers::ln2 * I);
  }();
  return c;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  const auto& g = gauss_rule();
  double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < kGaussPoints; ++i) s += g.w[i] * f(mid + 0.5 * h * g.x[i]);
    total += 0.5 * h * s;
  }
  return total;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 1.0 / (1.0 + std::exp(1.0 / x - 1.0 / (1.0 - x)));
}

double lp_profile_value(LpProfile profile, double r) {
  if (!(r > 0.5 && r < 2.0)) return 0.0;
  double u = std::log2(r);
  if (profile == LpProfile::kBump) return bump_constant() * bump_raw(u);
  return std::sqrt(smooth_step(1.0 - std::abs(u)) / std::numbers::ln2);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double ball_indicator_transform(int d, double r) {
  if (r < 1e-8) return unit_ball_volume(d);
  if (d == 1) return 2.0 * std::sin(r) / r;
  double nu = 0.5 * d;
  return std::pow(2.0 * std::numbers::pi, nu) * std::cyl_bessel_j(nu, r) / std::pow(r, nu);
}

double KernelPair::profile1(double r) const {
  switch (kind_) {
    case KernelKind::kLittlewoodPaley:
      return lp_profile_value(lp_profile_, r);
    case KernelKind::kPoisson:
      return std::exp(-r);
    case KernelKind::kHeat:
      return std::exp(-r * r);
    case KernelKind::kHeatLP:
      return r * r * std::exp(-r * r);
    case KernelKind::kIndicator:
      return ball_indicator_transform(dim1_, r);
  }
  return 0.0;
}

double KernelPair::profile2(double rho) const {
  if (kind_ == KernelKind::kIndicator) return ball_indicator_transform(dim2_, rho);
  return profile1(rho);
}

double KernelPair::factor1(double t, double r) const {
  double v = profile1(t * r);
  if (kind_ == KernelKind::kIndicator) v *= std::pow(t, dim1_);
  return v;
}

double KernelPair::factor2(double s, double rho) const {
  double v = profile2(s * rho);
  if (kind_ == KernelKind::kIndicator) v *= std::pow(s, dim2_);
  return v;
}

std::string KernelPair::name() const {
  std::string s = kernel_kind_name(kind_);
  if (kind_ == KernelKind::kLittlewoodPaley)
    s += lp_profile_ == LpProfile::kBump ? "/bump" : "/telescoping";
  s += "/";
  s += calibration_name(calibration_);
  return s;
}

KernelPair build_lp_pair(Calibration calibration, LpProfile profile) {
  KernelPair p;
  p.kind_ = KernelKind::kLittlewoodPaley;
  p.calibration_ = calibration;
  p.lp_profile_ = profile;
  return p;
}

KernelPair build_poisson_pair() {
  KernelPair p;
  p.kind_ = KernelKind::kPoisson;
  return p;
}

KernelPair build_heat_pair() {
  KernelPair p;
  p.kind_ = KernelKind::kHeat;
  return p;
}

KernelPair build_heatlp_pair(Calibration calibration) {
  KernelPair p;
  p.kind_ = KernelKind::kHeatLP;
  p.calibration_ = calibration;
  return p;
}

KernelPair build_indicator_pair(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("indicator pair: dimensions must be >= 1");
  KernelPair p;
  p.kind_ = KernelKind::kIndicator;
  p.dim1_ = n + m;
  p.dim2_ = m;
  return p;
}

namespace {

// periodic distance of index i from the origin, in cells
int wrap_dist(int i, int N) { return std::min(i, N - i); }

}  // namespace

GridFunction indicator_ball(const LatticeSpec& lattice, double t) {
  GridFunction g(lattice);
  std::vector<int> c(lattice.dims());
  const double h = lattice.cell_width();
  for (std::size_t i = 0; i < g.size(); ++i) {
    unravel(lattice, i, c);
    double r2 = 0.0;
    for (int a = 0; a < lattice.dims(); ++a) {
      double d = wrap_dist(c[a], lattice.N) * h;
      r2 += d * d;
    }
    g[i] = r2 <= t * t ? 1.0 : 0.0;
  }
  return g;
}

GridFunction indicator_flag(const LatticeSpec& lattice, double t, double s) {
  GridFunction ball = indicator_ball(lattice, t);
  const double h = lattice.cell_width();
  // exact integer partial convolution over the y axes
  std::vector<std::vector<int>> y_offsets;
  {
    std::vector<int> c(lattice.m, 0);
    std::size_t total = 1;
    for (int a = 0; a < lattice.m; ++a) total *= lattice.N;
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rem = k;
      double r2 = 0.0;
      for (int a = lattice.m - 1; a >= 0; --a) {
        c[a] = static_cast<int>(rem % lattice.N);
        rem /= lattice.N;
        double d = wrap_dist(c[a], lattice.N) * h;
        r2 += d * d;
      }
      if (r2 <= s * s) y_offsets.push_back(c);
    }
  }
  double ymass = 1.0;
  for (int a = 0; a < lattice.m; ++a) ymass *= h;
  GridFunction out(lattice);
  std::vector<int> c(lattice.dims());
  for (std::size_t i = 0; i < out.size(); ++i) {
    unravel(lattice, i, c);
    long count = 0;
    for (const auto& off : y_offsets) {
      std::size_t j = 0;
      for (int a = 0; a < lattice.dims(); ++a) {
        int v = c[a];
        if (a >= lattice.n) v = ((v - off[a - lattice.n]) % lattice.N + lattice.N) % lattice.N;
        j = j * lattice.N + v;
      }
      count += ball[j] > 0.0;
    }
    out[i] = count * ymass;
  }
  return out;
}

SpectralCalibration build_spectral_calibration() {
  double I = integrate([](double s) { return s * s * s * std::exp(-2.0 * s * s); }, 0.0, 12.0, 128);
  SpectralCalibration c;
  c.c = 1.0 / I;
  return c;
}

double analytic_calibration_integral(LpProfile profile) {
  return std::numbers::ln2 * integrate(
                                 [profile](double u) {
                                   double m = lp_profile_value(profile, std::exp2(u));
                                   return m * m;
                                 },
                                 -1.0, 1.0, 256);
}

RealVector build_riesz_multiplier(const LatticeSpec& lattice, int j, int k) {
  if (j < 1 || j > lattice.dims() || k < 1 || k > lattice.m)
    throw std::out_of_range("riesz multiplier: index out of range");
  auto ft = frequency_table(lattice);
  const int aj = j - 1, ak = lattice.n + k - 1;
  const std::uint8_t nyq = static_cast<std::uint8_t>((1u << aj) | (1u << ak));
  RealVector mult(lattice.spectral_size(), 0.0);
  for (std::size_t i = 0; i < mult.size(); ++i) {
    double r = ft->zeta_norm[i], rho = ft->eta_norm[i];
    if (rho == 0.0 || (ft->nyquist[i] & nyq)) continue;
    mult[i] = -(ft->omega(i, aj) / r) * (ft->omega(i, ak) / rho);
  }
  return mult;
}

const char* kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kLittlewoodPaley:
      return "LittlewoodPaley";
    case KernelKind::kPoisson:
      return "Poisson";
    case KernelKind::kHeat:
      return "Heat";
    case KernelKind::kHeatLP:
      return "HeatLP";
    case KernelKind::kIndicator:
      return "Indicator";
  }
  return "?";
}

KernelKind parse_kernel_kind(const std::string& s) {
  for (auto k : {KernelKind::kLittlewoodPaley, KernelKind::kPoisson, KernelKind::kHeat,
                 KernelKind::kHeatLP, KernelKind::kIndicator})
    if (s == kernel_kind_name(k)) return k;
  throw std::invalid_argument("unknown kernel kind: " + s);
}

const char* calibration_name(Calibration c) {
  return c == Calibration::kAnalytic ? "Analytic" : "DiscretelyRenormalized";
}

Calibration parse_calibration(const std::string& s) {
  if (s == "Analytic") return Calibration::kAnalytic;
  if (s == "DiscretelyRenormalized") return Calibration::kDiscretelyRenormalized;
  throw std::invalid_argument("unknown calibration: " + s);
}

}  // namespace flagwave
