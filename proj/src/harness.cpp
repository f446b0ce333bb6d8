#include "flagwave/harness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "flagwave/atomic.hpp"
#include "flagwave/flagconv.hpp"
#include "flagwave/io.hpp"
#include "flagwave/maximal.hpp"
#include "flagwave/parallel.hpp"
#include "flagwave/riesz.hpp"
#include "flagwave/square.hpp"

namespace flagwave {

const char* family_name(Family f) {
  switch (f) {
    case Family::kFlagGaussian:
      return "FlagGaussian";
    case Family::kBandLimitedRandom:
      return "BandLimitedRandom";
    case Family::kSyntheticAtom:
      return "SyntheticAtom";
    case Family::kVariant:
      return "TranslatedDilatedVariant";
  }
  return "?";
}

const std::array<const char*, kNormCount> kNormNames = {
    "g_F", "S_F", "M_star", "M_plus", "u_star", "u_plus", "S_F_u", "riesz", "S_heat"};

namespace {

using cplx = std::complex<double>;

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }
int pick(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform(rng) * (hi - lo + 1));
}

struct GaussParams {
  double sigma1, sigma2;
  int dx, dy, dz;             // derivative orders: x, y in the first factor, y in the second
  bool laplacian = false;     // |zeta|^2 |eta|^2 instead of the derivatives
  std::vector<double> center;
};

// Samples the periodic function whose Fourier transform is `symbol`.
template <typename Symbol>
GridFunction from_symbol(const LatticeSpec& lat, Symbol symbol) {
  auto ft = frequency_table(lat);
  const int d = lat.dims();
  SpectralField F(lat);
  std::vector<double> w(d);
  const double scale = 1.0 / lat.cell_volume();
  for (std::size_t q = 0; q < F.size(); ++q) {
    if (ft->nyquist[q]) continue;
    for (int a = 0; a < d; ++a) w[a] = ft->omega(q, a);
    F[q] = symbol(w) * scale;
  }
  return to_physical(F);
}

GridFunction gaussian_member(const LatticeSpec& lat, const GaussParams& p) {
  const int n = lat.n;
  return from_symbol(lat, [&](const std::vector<double>& w) {
    double z2 = 0.0, e2 = 0.0, phase = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a) {
      z2 += w[a] * w[a];
      if (static_cast<int>(a) >= n) e2 += w[a] * w[a];
      phase += w[a] * p.center[a];
    }
    cplx v = std::exp(-0.5 * p.sigma1 * p.sigma1 * z2 - 0.5 * p.sigma2 * p.sigma2 * e2);
    if (p.laplacian) {
      v *= z2 * e2;
    } else {
      const cplx i(0.0, 1.0);
      v *= std::pow(i * w[0], p.dx) * std::pow(i * w[n], p.dy + p.dz);
    }
    return v * std::polar(1.0, -phase);
  });
}

void check_margin(const LatticeSpec& lat, const CorpusSpec& spec, const GaussParams& p) {
  const double half = lat.L / 2.0;
  const double ext_x = spec.decay_margin * p.sigma1;
  const double ext_y = spec.decay_margin * std::hypot(p.sigma1, p.sigma2);
  if (ext_x > half || ext_y > half)
    throw std::invalid_argument("gen_corpus: Gaussian width violates the decay margin");
}

GaussParams draw_gauss(std::mt19937_64& rng, const CorpusSpec& spec, const LatticeSpec& lat) {
  GaussParams p;
  p.sigma1 = uniform(rng, spec.sigma_min, spec.sigma_max);
  p.sigma2 = uniform(rng, spec.sigma_min, spec.sigma_max);
  p.dx = pick(rng, 0, 1);
  p.dy = pick(rng, 0, 1);
  p.dz = pick(rng, 1, 2);
  for (int a = 0; a < lat.dims(); ++a) p.center.push_back(uniform(rng, 0.0, lat.L));
  return p;
}

std::size_t half_index(const LatticeSpec& lat, const std::vector<int>& q) {
  const int d = lat.dims();
  const std::size_t last = static_cast<std::size_t>(lat.N / 2 + 1);
  std::size_t idx = 0;
  for (int a = 0; a < d - 1; ++a) idx = idx * lat.N + ((q[a] % lat.N) + lat.N) % lat.N;
  return idx * last + static_cast<std::size_t>(q[d - 1]);
}

GridFunction band_limited_member(const LatticeSpec& lat, const CorpusSpec& spec,
                                 std::mt19937_64& rng) {
  const int d = lat.dims();
  const int B = spec.band_max;
  if (2 * B >= lat.N) throw std::invalid_argument("gen_corpus: band exceeds the lattice");
  SpectralField F(lat);
  const double full = static_cast<double>(lat.size());
  const int modes = 24;
  for (int t = 0; t < modes; ++t) {
    std::vector<int> q(d);
    double q2 = 0.0;
    bool eta_zero = true;
    for (int a = 0; a < d; ++a) {
      q[a] = pick(rng, -B, B);
      q2 += static_cast<double>(q[a]) * q[a];
      if (a >= lat.n && q[a] != 0) eta_zero = false;
    }
    const double amp = std::exp(-q2 / (2.0 * (B / 2.0) * (B / 2.0))) * (0.5 + uniform(rng));
    const double phi = uniform(rng, 0.0, 2.0 * std::acos(-1.0));
    if (eta_zero) continue;  // no mass on eta = 0
    // a cos(w x + phi) = a/2 (e^{i phi} e^{i w x} + conj)
    cplx c = 0.5 * amp * full * std::polar(1.0, phi);
    if (q[d - 1] < 0) {
      for (auto& v : q) v = -v;
      c = std::conj(c);
    }
    F[half_index(lat, q)] += c;
    if (q[d - 1] == 0) {
      for (auto& v : q) v = -v;
      F[half_index(lat, q)] += std::conj(c);
    }
  }
  return to_physical(F);
}

void normalize(GridFunction& f) {
  double e = 0.0;
  for (double v : f.values()) e += v * v;
  e = std::sqrt(e * f.lattice().cell_volume());
  if (!(e > 0.0)) throw std::invalid_argument("gen_corpus: generated a zero member");
  for (auto& v : f.values()) v /= e;
}

}  // namespace

MomentCheck moment_check(const GridFunction& f) {
  const auto& lat = f.lattice();
  auto ft = frequency_table(lat);
  SpectralField F = to_spectral(f);
  double total = 0.0, axis = 0.0;
  for (std::size_t q = 0; q < F.size(); ++q) {
    double e = hermitian_weight(lat, q) * std::norm(F[q]);
    total += e;
    if (ft->eta_norm[q] == 0.0) axis += e;
  }
  MomentCheck m;
  if (total > 0.0) {
    m.eta_zero_energy = axis / total;
    m.mean = std::abs(F[0]) / std::sqrt(total);
  }
  return m;
}

std::vector<CorpusMember> gen_corpus(const CorpusSpec& spec, const LatticeSpec& lattice) {
  if (spec.flag_gaussian < 0 || spec.band_limited < 0 || spec.synthetic_atom < 0 ||
      spec.variants < 0)
    throw std::invalid_argument("gen_corpus: negative family count");
  if (!(spec.sigma_min > 0.0) || spec.sigma_max < spec.sigma_min)
    throw std::invalid_argument("gen_corpus: bad width range");
  std::mt19937_64 rng(spec.seed);
  std::vector<CorpusMember> out;
  std::vector<GaussParams> gauss;

  auto add = [&](std::string name, Family fam, GridFunction f) {
    normalize(f);
    auto m = moment_check(f);
    if (m.eta_zero_energy > 1e-24 || m.mean > 1e-12)
      throw std::invalid_argument("gen_corpus: member " + name + " fails the moment checks");
    out.push_back({std::move(name), fam, std::move(f)});
  };

  for (int i = 0; i < spec.flag_gaussian; ++i) {
    auto p = draw_gauss(rng, spec, lattice);
    check_margin(lattice, spec, p);
    gauss.push_back(p);
    add("flag_gaussian_" + std::to_string(i), Family::kFlagGaussian, gaussian_member(lattice, p));
  }
  for (int i = 0; i < spec.band_limited; ++i)
    add("band_limited_" + std::to_string(i), Family::kBandLimitedRandom,
        band_limited_member(lattice, spec, rng));
  for (int i = 0; i < spec.synthetic_atom; ++i) {
    auto p = draw_gauss(rng, spec, lattice);
    p.laplacian = true;
    check_margin(lattice, spec, p);
    add("synthetic_atom_" + std::to_string(i), Family::kSyntheticAtom,
        gaussian_member(lattice, p));
  }
  for (int i = 0; i < spec.variants; ++i) {
    GaussParams p = gauss.empty() ? draw_gauss(rng, spec, lattice)
                                  : gauss[static_cast<std::size_t>(i) % gauss.size()];
    const double dil = std::sqrt(2.0);
    const double factor = i % 2 ? 1.0 / dil : dil;
    p.sigma1 *= factor;
    p.sigma2 *= factor;
    for (auto& c : p.center) c = std::fmod(c + uniform(rng, 0.0, lattice.L), lattice.L);
    check_margin(lattice, spec, p);
    add("variant_" + std::to_string(i), Family::kVariant, gaussian_member(lattice, p));
  }
  return out;
}

double NormTable::log_ratio(std::size_t row, int a, int b) const {
  const auto& r = rows.at(row).norms;
  return std::log(r.at(a)) - std::log(r.at(b));
}

double NormTable::ratio(std::size_t row, int a, int b) const {
  return std::exp(log_ratio(row, a, b));
}

double NormTable::c_emp() const {
  double spread = 0.0;
  for (int a = 0; a < kNormCount; ++a)
    for (int b = a + 1; b < kNormCount; ++b) {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        double v = log_ratio(r, a, b);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (!rows.empty()) spread = std::max(spread, hi - lo);
    }
  return std::exp(spread);
}

double NormTable::ratio_bound() const {
  double m = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int a = 0; a < kNormCount; ++a)
      for (int b = 0; b < kNormCount; ++b) m = std::max(m, std::abs(log_ratio(r, a, b)));
  return std::exp(m);
}

std::string NormTable::to_csv() const {
  std::ostringstream os;
  os << "name,family";
  for (auto n : kNormNames) os << ',' << n;
  os << '\n';
  for (const auto& r : rows) {
    os << r.name << ',' << r.family;
    for (double v : r.norms) os << ',' << format_double(v);
    os << '\n';
  }
  return os.str();
}

nlohmann::json NormTable::to_json() const {
  nlohmann::json j;
  j["norm_names"] = kNormNames;
  j["rows"] = nlohmann::json::array();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    nlohmann::json norms = nlohmann::json::object(), lr = nlohmann::json::array();
    for (int a = 0; a < kNormCount; ++a) {
      norms[kNormNames[a]] = rows[r].norms[a];
      nlohmann::json line = nlohmann::json::array();
      for (int b = 0; b < kNormCount; ++b) line.push_back(log_ratio(r, a, b));
      lr.push_back(line);
    }
    j["rows"].push_back({{"name", rows[r].name},
                         {"family", rows[r].family},
                         {"norms", norms},
                         {"log_ratio", lr}});
  }
  j["c_emp"] = c_emp();
  j["ratio_bound"] = ratio_bound();
  return j;
}

std::array<double, kNormCount> norm_row(const GridFunction& f, const ScaleGrid& grid) {
  std::array<double, kNormCount> r{};
  const auto lp = build_lp_pair(Calibration::kDiscretelyRenormalized);
  r[0] = lp_norm(g_F(f, lp, grid).value, 1.0);
  r[1] = lp_norm(S_F(f, lp, grid).value, 1.0);
  auto heat = maximal_pair(f, build_heat_pair(), grid);
  r[2] = lp_norm(heat.nontangential.value, 1.0);
  r[3] = lp_norm(heat.radial.value, 1.0);
  auto poisson = maximal_pair(f, build_poisson_pair(), grid);
  r[4] = lp_norm(poisson.nontangential.value, 1.0);
  r[5] = lp_norm(poisson.radial.value, 1.0);
  r[6] = lp_norm(S_F_u(f, grid).value, 1.0);
  r[7] = riesz_norm(f);
  r[8] = lp_norm(S_heat(f, grid).value, 1.0);
  return r;
}

NormTable norm_table(const std::vector<CorpusMember>& corpus, const NormOptions& options) {
  if (corpus.empty()) throw std::invalid_argument("norm_table: empty corpus");
  ScaleGrid grid = options.grid;
  grid.bind(corpus.front().f.lattice());
  if (!grid.full_coverage())
    throw std::invalid_argument("norm_table: scale grid does not cover the lattice spectrum");
  NormTable t;
  t.rows.resize(corpus.size());
  parallel_for(corpus.size(), options.workers, [&](std::size_t i) {
    const auto& m = corpus[i];
    t.rows[i] = {m.name, family_name(m.family), norm_row(m.f, grid)};
  });
  return t;
}

PPResult pp_check(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid,
                  int cell_shift) {
  if (cell_shift < 0) throw std::invalid_argument("pp_check: negative cell shift");
  const auto& lat = f.lattice();
  FilterBank bank(pair, grid, lat);
  const std::size_t P = lat.size();
  const int d = lat.dims();
  GridFunction sup_acc(lat), inf_acc(lat);
  std::map<std::pair<int, int>, std::vector<std::uint32_t>> cell_of;
  std::vector<int> coords(d);
  std::vector<double> cmax, cmin;

  for_each_block(to_spectral(f), bank, [&](const BlockInfo& info, const GridFunction& b) {
    auto [a, c] = tent_class(lat, info.j, info.k);
    a = std::max(0, a - cell_shift);
    c = std::max(0, c - cell_shift);
    auto it = cell_of.find({a, c});
    if (it == cell_of.end()) {
      std::vector<std::uint32_t> idx(P);
      for (std::size_t p = 0; p < P; ++p) {
        unravel(lat, p, coords);
        std::size_t k = 0;
        for (int ax = 0; ax < d; ++ax) {
          int lvl = ax < lat.n ? a : c;
          k = k * static_cast<std::size_t>(lat.N >> lvl) + (coords[ax] >> lvl);
        }
        idx[p] = static_cast<std::uint32_t>(k);
      }
      it = cell_of.emplace(std::make_pair(a, c), std::move(idx)).first;
    }
    const auto& idx = it->second;
    const std::size_t cells = P >> (a * lat.n + c * lat.m);
    cmax.assign(cells, 0.0);
    cmin.assign(cells, INFINITY);
    for (std::size_t p = 0; p < P; ++p) {
      double v = b[p] * b[p];
      cmax[idx[p]] = std::max(cmax[idx[p]], v);
      cmin[idx[p]] = std::min(cmin[idx[p]], v);
    }
    for (std::size_t p = 0; p < P; ++p) {
      sup_acc[p] += info.weight * cmax[idx[p]];
      inf_acc[p] += info.weight * cmin[idx[p]];
    }
  });
  for (auto& v : sup_acc.values()) v = std::sqrt(v);
  for (auto& v : inf_acc.values()) v = std::sqrt(v);
  return {lp_norm(sup_acc, 1.0), lp_norm(inf_acc, 1.0)};
}

OpenSet random_open_set(const LatticeSpec& lattice, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int d = lattice.dims();
  const int N = lattice.N;
  std::vector<std::uint8_t> mask(lattice.size(), 0);
  std::vector<int> lo(d), len(d), coords(d);
  const int count = pick(rng, 1, 6);
  for (int r = 0; r < count; ++r) {
    for (int a = 0; a < d; ++a) {
      lo[a] = pick(rng, 0, N - 1);
      len[a] = pick(rng, 1, std::max(1, N / 3));
    }
    for (std::size_t p = 0; p < mask.size(); ++p) {
      unravel(lattice, p, coords);
      bool in = true;
      for (int a = 0; a < d && in; ++a) in = ((coords[a] - lo[a]) % N + N) % N < len[a];
      if (in) mask[p] = 1;
    }
  }
  return OpenSet(lattice, std::move(mask));
}

}  // namespace flagwave
