#include "flagwave/riesz.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>

#include "flagwave/kernels.hpp"
#include "flagwave/simd.hpp"

namespace flagwave {

namespace {

GridFunction apply_multiplier(const GridFunction& f, const RealVector& m, bool imag) {
  SpectralField F = to_spectral(f);
  auto c = F.coefficients();
  if (imag) simd::active().multiply_imag(c.data(), c.data(), m.data(), c.size());
  else simd::active().multiply_real(c.data(), c.data(), m.data(), c.size());
  return to_physical(F);
}

// -zeta_a / |radius| (the coefficient of -i), zero on the Nyquist plane of a.
RealVector direction_cosine(const LatticeSpec& lat, int axis, bool second) {
  auto ft = frequency_table(lat);
  RealVector m(lat.spectral_size(), 0.0);
  for (std::size_t q = 0; q < m.size(); ++q) {
    double r = second ? ft->eta_norm[q] : ft->zeta_norm[q];
    if (r == 0.0 || (ft->nyquist[q] >> axis & 1u)) continue;
    m[q] = -ft->omega(q, axis) / r;
  }
  return m;
}

}  // namespace

GridFunction apply_riesz(const GridFunction& f, int j, int k) {
  return apply_multiplier(f, build_riesz_multiplier(f.lattice(), j, k), false);
}

GridFunction apply_riesz_first(const GridFunction& f, int j) {
  const auto& lat = f.lattice();
  if (j < 1 || j > lat.dims()) throw std::out_of_range("riesz: index out of range");
  return apply_multiplier(f, direction_cosine(lat, j - 1, false), true);
}

GridFunction apply_riesz_second(const GridFunction& f, int k) {
  const auto& lat = f.lattice();
  if (k < 1 || k > lat.m) throw std::out_of_range("riesz: index out of range");
  return apply_multiplier(f, direction_cosine(lat, lat.n + k - 1, true), true);
}

RieszSuite riesz_suite(const GridFunction& f) {
  const auto& lat = f.lattice();
  RieszSuite s;
  s.riesz_norm = lp_norm(f, 1.0);
  for (int j = 1; j <= lat.dims(); ++j)
    for (int k = 1; k <= lat.m; ++k) {
      s.transforms.push_back(apply_riesz(f, j, k));
      s.riesz_norm += lp_norm(s.transforms.back(), 1.0);
    }
  return s;
}

double riesz_norm(const GridFunction& f) { return riesz_suite(f).riesz_norm; }

double heat_root_integral(double r, double t_max) {
  constexpr double a = 1e-6;
  const double r2 = r * r;
  // series for the piece on (0, a]
  double tail = 0.0, term_pow = std::sqrt(a), fact = 1.0;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      term_pow *= -r2 * a;
      fact *= k;
    }
    double term = term_pow / (fact * (k + 0.5));
    tail += term;
    if (std::abs(term) < 1e-18 * std::abs(tail)) break;
  }
  if (t_max <= a) return tail;
  const double u0 = std::log(a), u1 = std::log(t_max);
  const double decades = (u1 - u0) / std::numbers::ln10;
  int n = static_cast<int>(std::ceil(64.0 * decades));
  if (n % 2) ++n;
  const double h = (u1 - u0) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    double t = std::exp(u0 + i * h);
    double v = std::exp(-t * r2) * std::sqrt(t);  // dt / sqrt(t) = sqrt(t) du
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * v;
  }
  return tail + s * h / 3.0;
}

GridFunction riesz_via_heat(const GridFunction& f, int j, int k, double t_max) {
  const auto& lat = f.lattice();
  if (j < 1 || j > lat.dims() || k < 1 || k > lat.m)
    throw std::out_of_range("riesz_via_heat: index out of range");
  const double r_min = 2.0 * std::numbers::pi / lat.L;
  if (!(std::exp(-t_max * r_min * r_min) < 1e-12))
    throw std::invalid_argument("riesz_via_heat: t_max too small for the lowest frequency");
  auto ft = frequency_table(lat);
  const int aj = j - 1, ak = lat.n + k - 1;
  std::map<long, double> cache;  // keyed by sum of q^2 over the relevant axes
  auto Q = [&](long key, double r) {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    double v = heat_root_integral(r, t_max);
    cache.emplace(key, v);
    return v;
  };
  RealVector m(lat.spectral_size(), 0.0);
  for (std::size_t q = 0; q < m.size(); ++q) {
    double r = ft->zeta_norm[q], rho = ft->eta_norm[q];
    if (rho == 0.0 || (ft->nyquist[q] >> aj & 1u) || (ft->nyquist[q] >> ak & 1u)) continue;
    long kz = 0, ke = 0;
    for (int a = 0; a < lat.dims(); ++a) {
      long v = ft->q_at(q, a);
      kz += v * v;
      if (a >= lat.n) ke += v * v;
    }
    m[q] = -(ft->omega(q, aj) * Q(kz, r)) * (ft->omega(q, ak) * Q(-1 - ke, rho)) /
           std::numbers::pi;
  }
  return apply_multiplier(f, m, false);
}

double conjugate_system_residual(const GridFunction& f, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0)) throw std::invalid_argument("residual: nonpositive scale");
  using cd = std::complex<double>;
  const auto& lat = f.lattice();
  const int d = lat.dims(), m = lat.m, n = lat.n;
  auto ft = frequency_table(lat);
  SpectralField F = to_spectral(f);

  // equation slots: CR1 per k: (d+1)^2 symmetric pairs + divergence;
  // CR2 per j: (m+1)^2 pairs + divergence
  const int cr1 = (d + 1) * (d + 1) + 1, cr2 = (m + 1) * (m + 1) + 1;
  const int slots = (m + 1) * cr1 + (d + 1) * cr2;
  std::vector<double> diff(slots, 0.0), lhs(slots, 0.0), rhs(slots, 0.0);

  std::vector<cd> A(d + 1), B(m + 1), dx(d + 1), dy(m + 1);
  const cd I(0.0, 1.0);
  for (std::size_t q = 0; q < F.size(); ++q) {
    cd fh = F[q];
    if (fh == cd(0.0)) continue;
    double w = hermitian_weight(lat, q) * std::norm(fh);
    double r = ft->zeta_norm[q], rho = ft->eta_norm[q];
    double er = std::exp(-t * r), es = std::exp(-s * rho);
    auto axis_ok = [&](int a) { return !(ft->nyquist[q] >> a & 1u); };
    A[0] = er;
    dx[0] = -r;
    for (int a = 1; a <= d; ++a) {
      bool ok = axis_ok(a - 1) && r > 0.0;
      double om = ft->omega(q, a - 1);
      A[a] = ok ? -I * (om / r) * er : cd(0.0);
      dx[a] = axis_ok(a - 1) ? I * om : cd(0.0);
    }
    B[0] = es;
    dy[0] = -rho;
    for (int b = 1; b <= m; ++b) {
      int ax = n + b - 1;
      bool ok = axis_ok(ax) && rho > 0.0;
      double om = ft->omega(q, ax);
      B[b] = ok ? -I * (om / rho) * es : cd(0.0);
      dy[b] = axis_ok(ax) ? I * om : cd(0.0);
    }
    // dx[0] and dy[0] act on the A and B factors respectively
    int slot = 0;
    for (int k = 0; k <= m; ++k) {
      cd div = 0.0;
      double divmag = 0.0;
      for (int i = 0; i <= d; ++i) {
        for (int j = 0; j <= d; ++j) {
          cd L = dx[i] * A[j] * B[k], R = dx[j] * A[i] * B[k];
          diff[slot] += w * std::norm(L - R);
          lhs[slot] += w * std::norm(L);
          rhs[slot] += w * std::norm(R);
          ++slot;
        }
        cd term = dx[i] * A[i] * B[k];
        div += term;
        divmag += std::abs(term);
      }
      diff[slot] += w * std::norm(div);
      lhs[slot] += w * divmag * divmag;
      rhs[slot] += w * divmag * divmag;
      ++slot;
    }
    for (int j = 0; j <= d; ++j) {
      cd div = 0.0;
      double divmag = 0.0;
      for (int i = 0; i <= m; ++i) {
        for (int b = 0; b <= m; ++b) {
          cd L = dy[i] * A[j] * B[b], R = dy[b] * A[j] * B[i];
          diff[slot] += w * std::norm(L - R);
          lhs[slot] += w * std::norm(L);
          rhs[slot] += w * std::norm(R);
          ++slot;
        }
        cd term = dy[i] * A[j] * B[i];
        div += term;
        divmag += std::abs(term);
      }
      diff[slot] += w * std::norm(div);
      lhs[slot] += w * divmag * divmag;
      rhs[slot] += w * divmag * divmag;
      ++slot;
    }
  }
  double worst = 0.0;
  for (int e = 0; e < slots; ++e) {
    double scale = std::sqrt(std::max(lhs[e], rhs[e]));
    if (scale == 0.0) continue;
    worst = std::max(worst, std::sqrt(diff[e]) / scale);
  }
  return worst;
}

}  // namespace flagwave
