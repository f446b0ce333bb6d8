#include "flagwave/lattice.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace flagwave {

double LatticeSpec::cell_volume() const {
  double h = cell_width();
  double v = 1.0;
  for (int i = 0; i < dims(); ++i) v *= h;
  return v;
}

std::size_t LatticeSpec::size() const {
  std::size_t s = 1;
  for (int i = 0; i < dims(); ++i) s *= static_cast<std::size_t>(N);
  return s;
}

std::size_t LatticeSpec::spectral_size() const {
  std::size_t s = static_cast<std::size_t>(N / 2 + 1);
  for (int i = 0; i + 1 < dims(); ++i) s *= static_cast<std::size_t>(N);
  return s;
}

double LatticeSpec::torus_volume() const {
  double v = 1.0;
  for (int i = 0; i < dims(); ++i) v *= L;
  return v;
}

LatticeSpec make_lattice(int n, int m, int N, double L) {
  if (n < 1 || m < 1) throw std::invalid_argument("lattice: n and m must be >= 1");
  if (N < 8) throw std::invalid_argument("lattice: N must be >= 8");
  if (N % 2 != 0) throw std::invalid_argument("lattice: N must be even");
  if (!(L > 0.0) || !std::isfinite(L))
    throw std::invalid_argument("lattice: period L must be positive");
  return LatticeSpec{n, m, N, L};
}

GridFunction::GridFunction(const LatticeSpec& lattice)
    : lattice_(lattice), values_(lattice.size(), 0.0) {}

GridFunction::GridFunction(const LatticeSpec& lattice, RealVector values)
    : lattice_(lattice), values_(std::move(values)) {
  if (values_.size() != lattice_.size())
    throw std::invalid_argument("grid function: shape does not match lattice");
}

SpectralField::SpectralField(const LatticeSpec& lattice)
    : lattice_(lattice), coeffs_(lattice.spectral_size()) {}

namespace {

struct PlanPair {
  fftw_plan forward;
  fftw_plan backward;
};

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

// Plans are made once per shape with FFTW_ESTIMATE so the chosen algorithm,
// and hence every rounding, is the same on every run.
const PlanPair& plans_for(const LatticeSpec& lattice) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto key = std::make_pair(lattice.dims(), lattice.N);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<int> shape(lattice.dims(), lattice.N);
  RealVector r(lattice.size());
  ComplexVector c(lattice.spectral_size());
  auto* cp = reinterpret_cast<fftw_complex*>(c.data());
  PlanPair p;
  p.forward = fftw_plan_dft_r2c(lattice.dims(), shape.data(), r.data(), cp,
                                FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r(lattice.dims(), shape.data(), cp, r.data(),
                                 FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
  if (!p.forward || !p.backward) throw std::runtime_error("fftw planning failed");
  return cache.emplace(key, p).first->second;
}

}  // namespace

SpectralField to_spectral(const GridFunction& f) {
  const auto& lat = f.lattice();
  if (f.size() != lat.size())
    throw std::invalid_argument("to_spectral: shape mismatch");
  const auto& p = plans_for(lat);
  SpectralField F(lat);
  // r2c leaves its input intact but takes a non-const pointer.
  RealVector in(f.values().begin(), f.values().end());
  fftw_execute_dft_r2c(p.forward, in.data(),
                       reinterpret_cast<fftw_complex*>(F.coefficients().data()));
  return F;
}

GridFunction to_physical(const SpectralField& F) {
  const auto& lat = F.lattice();
  if (F.size() != lat.spectral_size())
    throw std::invalid_argument("to_physical: shape mismatch");
  const auto& p = plans_for(lat);
  ComplexVector in(F.coefficients().begin(), F.coefficients().end());
  GridFunction f(lat);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(in.data()),
                       f.values().data());
  double scale = 1.0 / static_cast<double>(lat.size());
  for (double& v : f.values()) v *= scale;
  return f;
}

void to_physical_destructive(const LatticeSpec& lattice,
                             std::span<std::complex<double>> coeffs, GridFunction& out) {
  if (coeffs.size() != lattice.spectral_size() || out.size() != lattice.size())
    throw std::invalid_argument("to_physical: shape mismatch");
  const auto& p = plans_for(lattice);
  fftw_execute_dft_c2r(p.backward, reinterpret_cast<fftw_complex*>(coeffs.data()),
                       out.values().data());
  double scale = 1.0 / static_cast<double>(lattice.size());
  for (double& v : out.values()) v *= scale;
}

double hermitian_weight(const LatticeSpec& lattice, std::size_t index) {
  std::size_t last = index % static_cast<std::size_t>(lattice.N / 2 + 1);
  return (last == 0 || last == static_cast<std::size_t>(lattice.N / 2)) ? 1.0 : 2.0;
}

double spectral_energy(const SpectralField& F) {
  const auto& lat = F.lattice();
  std::size_t half = static_cast<std::size_t>(lat.N / 2 + 1);
  double s = 0.0;
  auto c = F.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t last = i % half;
    double w = (last == 0 || last == half - 1) ? 1.0 : 2.0;
    s += w * std::norm(c[i]);
  }
  return s;
}

double parseval_factor(const LatticeSpec& lattice) {
  return lattice.cell_volume() / static_cast<double>(lattice.size());
}

double lp_norm(const GridFunction& f, double p) {
  auto v = f.values();
  if (std::isinf(p) && p > 0) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    return mx;
  }
  if (p != 1.0 && p != 2.0) throw std::invalid_argument("lp_norm: unsupported p");
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    a[i] = p == 1.0 ? std::abs(v[i]) : v[i] * v[i];
  std::sort(a.begin(), a.end());
  double s = 0.0;
  for (double x : a) s += x;
  s *= f.lattice().cell_volume();
  return p == 1.0 ? s : std::sqrt(s);
}

void unravel(const LatticeSpec& lattice, std::size_t index, std::span<int> coords) {
  for (int a = lattice.dims() - 1; a >= 0; --a) {
    coords[a] = static_cast<int>(index % lattice.N);
    index /= lattice.N;
  }
}

GridFunction shifted(const GridFunction& f, std::span<const int> cells) {
  const auto& lat = f.lattice();
  if (static_cast<int>(cells.size()) != lat.dims())
    throw std::invalid_argument("shifted: one offset per axis required");
  GridFunction g(lat);
  std::vector<int> c(lat.dims());
  for (std::size_t i = 0; i < f.size(); ++i) {
    unravel(lat, i, c);
    std::size_t j = 0;
    for (int a = 0; a < lat.dims(); ++a) {
      int v = ((c[a] + cells[a]) % lat.N + lat.N) % lat.N;
      j = j * lat.N + v;
    }
    g[j] = f[i];
  }
  return g;
}

double FrequencyTable::omega(std::size_t index, int axis) const {
  return 2.0 * std::numbers::pi * q_at(index, axis) / lattice.L;
}

std::shared_ptr<const FrequencyTable> frequency_table(const LatticeSpec& lattice) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, double>, std::shared_ptr<const FrequencyTable>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(lattice.n, lattice.m, lattice.N, lattice.L);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  auto t = std::make_shared<FrequencyTable>();
  t->lattice = lattice;
  const int d = lattice.dims();
  const int N = lattice.N;
  const std::size_t S = lattice.spectral_size();
  t->q.resize(S * d);
  t->zeta_norm.resize(S);
  t->eta_norm.resize(S);
  t->nyquist.resize(S);
  const double k = 2.0 * std::numbers::pi / lattice.L;
  std::vector<int> extent(d, N);
  extent[d - 1] = N / 2 + 1;
  for (std::size_t i = 0; i < S; ++i) {
    std::size_t rem = i;
    std::uint8_t nyq = 0;
    double z2 = 0.0, e2 = 0.0;
    for (int a = d - 1; a >= 0; --a) {
      int idx = static_cast<int>(rem % extent[a]);
      rem /= extent[a];
      int q = (a == d - 1) ? (idx == N / 2 ? -N / 2 : idx) : (idx < N / 2 ? idx : idx - N);
      t->q[i * d + a] = q;
      if (q == -N / 2) nyq |= static_cast<std::uint8_t>(1u << a);
      double w = k * q;
      z2 += w * w;
      if (a >= lattice.n) e2 += w * w;
    }
    t->zeta_norm[i] = std::sqrt(z2);
    t->eta_norm[i] = std::sqrt(e2);
    t->nyquist[i] = nyq;
  }
  cache.emplace(key, t);
  return t;
}

}  // namespace flagwave
