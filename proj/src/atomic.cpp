#include "flagwave/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "flagwave/cone.hpp"
#include "flagwave/flagconv.hpp"
#include "flagwave/io.hpp"
#include "flagwave/maximal.hpp"
#include "flagwave/simd.hpp"

namespace flagwave {

std::vector<LevelSet> level_sets(const SquareFunctionResult& S, int level_min, int level_max) {
  if (level_min > level_max) throw std::invalid_argument("level_sets: empty level range");
  const auto& lat = S.value.lattice();
  std::vector<LevelSet> out;
  for (int l = level_min; l <= level_max; ++l) {
    const double thr = std::ldexp(1.0, l);
    std::vector<std::uint8_t> mask(lat.size());
    bool any = false;
    for (std::size_t i = 0; i < mask.size(); ++i) {
      mask[i] = S.value[i] > thr;
      any |= mask[i] != 0;
    }
    if (!any) continue;
    out.push_back({l, OpenSet(lat, std::move(mask))});
  }
  return out;
}

RectangleClassification::RectangleClassification(const LatticeSpec& lattice,
                                                 const std::vector<LevelSet>& levels)
    : lattice_(lattice), depth_(dyadic_depth(lattice)) {
  const int D = depth_ + 1;
  labels_.resize(static_cast<std::size_t>(D) * D);
  for (int a = 0; a <= depth_; ++a)
    for (int b = a; b <= depth_; ++b) {
      std::size_t anchors = std::size_t{1}
                            << ((depth_ - a) * lattice.n + (depth_ - b) * lattice.m);
      labels_[a * D + b].assign(anchors, kUnlabeled);
    }
  // ascending levels, so later writes are larger labels
  int prev = std::numeric_limits<int>::min();
  for (const auto& L : levels) {
    if (!(L.omega.lattice == lattice)) throw std::invalid_argument("classify: lattice mismatch");
    if (L.level <= prev) throw std::invalid_argument("classify: levels must ascend");
    prev = L.level;
    CountPyramid P(lattice, L.omega.mask);
    for (int a = 0; a <= depth_; ++a)
      for (int b = a; b <= depth_; ++b) {
        const auto& cnt = P.counts(a, b);
        const auto cells = P.class_cells(a, b);
        auto& lab = labels_[a * D + b];
        for (std::size_t i = 0; i < cnt.size(); ++i)
          if (2 * static_cast<std::uint64_t>(cnt[i]) > cells) lab[i] = L.level;
      }
  }
}

const std::vector<int>& RectangleClassification::labels(int a, int b) const {
  if (a < 0 || b < a || b > depth_) throw std::out_of_range("classification: class out of range");
  return labels_[a * (depth_ + 1) + b];
}

std::vector<DyadicRectangle> RectangleClassification::rectangles(int level) const {
  std::vector<DyadicRectangle> out;
  CountPyramid geometry(lattice_, std::vector<std::uint8_t>(lattice_.size(), 0));
  for (int a = 0; a <= depth_; ++a)
    for (int b = a; b <= depth_; ++b) {
      const auto& lab = labels(a, b);
      for (std::size_t i = 0; i < lab.size(); ++i)
        if (lab[i] == level) out.push_back({a, b, geometry.anchor_cells(a, b, i)});
    }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t RectangleClassification::count(int level) const {
  std::size_t c = 0;
  for (int a = 0; a <= depth_; ++a)
    for (int b = a; b <= depth_; ++b)
      for (int v : labels(a, b)) c += v == level;
  return c;
}

std::vector<int> RectangleClassification::cell_labels(int a, int b) const {
  const auto& lab = labels(a, b);
  const int d = lattice_.dims();
  std::vector<int> out(lattice_.size());
  std::vector<int> coords(d);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    unravel(lattice_, idx, coords);
    std::size_t anchor = 0;
    for (int ax = 0; ax < d; ++ax) {
      int lvl = ax < lattice_.n ? a : b;
      anchor = anchor * static_cast<std::size_t>(lattice_.N >> lvl) + (coords[ax] >> lvl);
    }
    out[idx] = lab[anchor];
  }
  return out;
}

RectangleClassification classify_rectangles(const std::vector<LevelSet>& levels,
                                             const LatticeSpec& lattice) {
  return RectangleClassification(lattice, levels);
}

std::pair<int, int> tent_class(const LatticeSpec& lattice, int j, int k) {
  const int D = dyadic_depth(lattice);
  const double h = lattice.cell_width();
  auto level = [&](int e) {
    double v = std::round(std::log2(std::ldexp(1.0, -e) / h));
    return static_cast<int>(std::clamp(v, 0.0, static_cast<double>(D)));
  };
  return {level(j), level(std::min(j, k))};
}

nlohmann::json report_json(const AtomValidationReport& r) {
  return {{"support_mass_inside", r.support_mass_inside},
          {"l2_norm_ratio", r.l2_norm_ratio},
          {"per_rectangle_budget", r.per_rectangle_budget},
          {"passed", r.passed}};
}

std::vector<std::uint8_t> dilate_open_set(const OpenSet& omega, double dilation) {
  if (!(dilation >= 1.0)) throw std::invalid_argument("dilate: factor below 1");
  const auto& lat = omega.lattice;
  std::vector<std::uint8_t> out(lat.size(), 0);
  if (omega.empty()) return out;
  CountPyramid P(lat, omega.mask);
  const int D = P.depth();
  GridFunction start(lat);
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D; ++b) {
      const auto& cnt = P.counts(a, b);
      const auto full = P.class_cells(a, b);
      std::fill(start.values().begin(), start.values().end(), 0.0);
      bool any = false;
      for (std::size_t i = 0; i < cnt.size(); ++i) {
        if (cnt[i] != full) continue;
        auto cell = P.anchor_cells(a, b, i);
        std::size_t idx = 0;
        for (int c : cell) idx = idx * lat.N + c;
        start[idx] = 1.0;
        any = true;
      }
      if (!any) continue;
      // the enlargement of a rectangle with anchor p and side w covers cells
      // p - e .. p + w - 1 + e, e = floor((dilation - 1) / 2 * w)
      ConeSection sec;
      for (int ax = 0; ax < lat.dims(); ++ax) {
        std::size_t w = std::size_t{1} << (ax < lat.n ? a : b);
        auto e = static_cast<std::size_t>(std::floor((dilation - 1.0) / 2.0 * w + 1e-12));
        sec.axes.push_back(clip_window(w - 1 + e, e, lat.N));
      }
      window_max_inplace(start, sec);
      for (std::size_t i = 0; i < out.size(); ++i)
        if (start[i] > 0.0) out[i] = 1;
    }
  return out;
}

namespace {

// Squared norms of (l_I^2 D1)^(k1-M) (l_J^2 D2)^(k2-M) P for k1, k2 in 0..M,
// row-major in (k1, k2).
std::vector<double> budget_terms(const LatticeSpec& lat,
                                 std::span<const std::complex<double>> P, int a, int b,
                                 int M) {
  auto ft = frequency_table(lat);
  const double lI = lat.cell_width() * std::ldexp(1.0, a);
  const double lJ = lat.cell_width() * std::ldexp(1.0, b);
  const int K = M + 1;
  std::vector<double> out(static_cast<std::size_t>(K) * K, 0.0);
  std::vector<double> px(K), py(K);
  for (std::size_t q = 0; q < P.size(); ++q) {
    const double e = std::norm(P[q]);
    if (e == 0.0) continue;
    const double x = lI * lI * ft->zeta_norm[q] * ft->zeta_norm[q];
    const double y = lJ * lJ * ft->eta_norm[q] * ft->eta_norm[q];
    for (int k = 0; k < K; ++k) {
      px[k] = std::pow(x, 2.0 * (k - M));
      py[k] = std::pow(y, 2.0 * (k - M));
    }
    const double hw = hermitian_weight(lat, q) * e;
    for (int k1 = 0; k1 < K; ++k1)
      for (int k2 = 0; k2 < K; ++k2) out[k1 * K + k2] += hw * px[k1] * py[k2];
  }
  for (auto& v : out) v *= parseval_factor(lat);
  return out;
}

struct LevelAccum {
  ComplexVector acc;
  double energy = 0.0;  // cell_volume * sum of w * (masked theta)^2
  std::vector<double> budget;
  std::vector<AtomPiece> pieces;
};

std::map<int, LevelAccum> run_synthesis(const GridFunction& f,
                                        const RectangleClassification& classes,
                                        const ScaleGrid& grid_in, const AtomicOptions& opt,
                                        const std::set<int>& wanted, bool keep_pieces) {
  const auto& lat = f.lattice();
  if (!(classes.lattice() == lat)) throw std::invalid_argument("synthesis: lattice mismatch");
  if (opt.M < 0) throw std::invalid_argument("synthesis: M must be nonnegative");
  ScaleGrid grid = grid_in;
  grid.bind(lat);
  const bool renorm = opt.calibration == Calibration::kDiscretelyRenormalized;
  if (renorm && !grid.full_coverage())
    throw std::invalid_argument("synthesis: renormalized calibration needs full scale coverage");

  const std::size_t S = lat.spectral_size();
  const int K = opt.M + 1;
  auto ft = frequency_table(lat);
  const auto& kern = simd::active();
  FilterBank theta_bank(build_heatlp_pair(Calibration::kAnalytic), grid, lat);
  const auto ts = grid.t_samples();
  const auto ss = grid.s_samples();
  const auto cal = build_spectral_calibration();

  // psi-tilde factors; renormalized mode divides by sum w psi h per radius
  auto psi_factors = [&](const std::vector<ScaleSample>& smp, const RealVector& radius,
                         bool first) {
    std::vector<RealVector> out(smp.size(), RealVector(S));
    for (std::size_t i = 0; i < smp.size(); ++i)
      for (std::size_t q = 0; q < S; ++q) out[i][q] = cal.psi(smp[i].value * radius[q]);
    if (!renorm) return out;
    for (std::size_t q = 0; q < S; ++q) {
      double D = 0.0;
      for (std::size_t i = 0; i < smp.size(); ++i) {
        double h = first ? theta_bank.first(i)[q] : theta_bank.second(i)[q];
        D += smp[i].weight * out[i][q] * h;
      }
      double inv = D > 0.0 ? 1.0 / D : 0.0;
      for (std::size_t i = 0; i < smp.size(); ++i) out[i][q] *= inv;
    }
    return out;
  };
  const auto psi1 = psi_factors(ts, ft->zeta_norm, true);
  const auto psi2 = psi_factors(ss, ft->eta_norm, false);

  std::map<std::pair<int, int>, std::vector<std::pair<std::size_t, std::size_t>>> by_class;
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t k = 0; k < ss.size(); ++k)
      by_class[tent_class(lat, ts[i].block, ss[k].block)].push_back({i, k});

  std::map<int, LevelAccum> levels;
  for (int l : wanted) {
    auto& L = levels[l];
    L.acc.assign(S, 0.0);
    L.budget.assign(static_cast<std::size_t>(K) * K, 0.0);
  }

  const SpectralField F = to_spectral(f);
  RealVector sym(S), psym(S);
  ComplexVector buf(S), tmp(S);
  GridFunction theta(lat), masked(lat);
  const double cv = lat.cell_volume();

  for (const auto& [cls, blocks] : by_class) {
    const auto labels = classes.cell_labels(cls.first, cls.second);
    std::set<int> present;
    for (int v : labels)
      if (v != RectangleClassification::kUnlabeled && wanted.count(v)) present.insert(v);
    if (present.empty()) continue;
    std::map<int, ComplexVector> piece;
    for (int l : present) piece[l].assign(S, 0.0);

    for (const auto& [i, k] : blocks) {
      theta_bank.symbol(i, k, sym);
      kern.multiply_real(buf.data(), F.coefficients().data(), sym.data(), S);
      if (std::all_of(buf.begin(), buf.end(),
                      [](const std::complex<double>& c) { return c == 0.0; }))
        continue;
      to_physical_destructive(lat, buf, theta);
      const double w = ts[i].weight * ss[k].weight;
      kern.product(psym.data(), psi1[i].data(), psi2[k].data(), S);
      for (auto& v : psym) v *= w;
      for (int l : present) {
        double e = 0.0;
        bool any = false;
        for (std::size_t c = 0; c < lat.size(); ++c) {
          double v = labels[c] == l ? theta[c] : 0.0;
          masked[c] = v;
          e += v * v;
          any |= v != 0.0;
        }
        if (!any) continue;
        levels[l].energy += cv * w * e;
        SpectralField B = to_spectral(masked);
        kern.multiply_real(tmp.data(), B.coefficients().data(), psym.data(), S);
        auto& P = piece[l];
        for (std::size_t q = 0; q < S; ++q) P[q] += tmp[q];
      }
    }

    for (auto& [l, P] : piece) {
      auto& L = levels[l];
      auto terms = budget_terms(lat, P, cls.first, cls.second, opt.M);
      for (std::size_t t = 0; t < terms.size(); ++t) L.budget[t] += terms[t];
      for (std::size_t q = 0; q < S; ++q) L.acc[q] += P[q];
      if (keep_pieces) {
        AtomPiece ap{cls.first, cls.second, SpectralField(lat)};
        std::copy(P.begin(), P.end(), ap.spectrum.coefficients().begin());
        L.pieces.push_back(std::move(ap));
      }
    }
  }
  return levels;
}

// Finishes one level: lambda, atom and budget from the accumulated pieces.
SynthesisResult finish_level(const LatticeSpec& lat, LevelAccum& L, const OpenSet& omega_tilde) {
  SynthesisResult r;
  r.atom = GridFunction(lat);
  const double area = omega_tilde.measure();
  r.lambda = std::sqrt(L.energy) * std::sqrt(area);
  if (!(r.lambda > 0.0)) {
    r.lambda = 0.0;
    return r;
  }
  to_physical_destructive(lat, L.acc, r.atom);
  for (auto& v : r.atom.values()) v /= r.lambda;
  const double inv2 = 1.0 / (r.lambda * r.lambda);
  double best = 0.0;
  for (double t : L.budget) best = std::max(best, t);
  r.budget = area * best * inv2;
  for (auto& p : L.pieces) {
    for (auto& c : p.spectrum.coefficients()) c /= r.lambda;
    r.pieces.push_back(std::move(p));
  }
  return r;
}

}  // namespace

AtomValidationReport assess_atom(const GridFunction& a, const OpenSet& omega, double dilation,
                                double budget, const AtomicOptions& tol) {
  AtomValidationReport rep;
  const auto dil = dilate_open_set(omega, dilation);
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double e = a[i] * a[i];
    total += e;
    if (dil[i]) inside += e;
  }
  rep.support_mass_inside = total > 0.0 ? inside / total : 1.0;
  rep.l2_norm_ratio = lp_norm(a, 2.0) * std::sqrt(omega.measure());
  rep.per_rectangle_budget = budget;
  rep.passed = rep.support_mass_inside >= tol.support_threshold &&
               rep.l2_norm_ratio <= tol.l2_tolerance &&
               rep.per_rectangle_budget <= tol.budget_tolerance;
  return rep;
}

AtomValidationReport validate_atom(const GridFunction& a, const OpenSet& omega, int M,
                                   double dilation, const std::vector<AtomPiece>& pieces,
                                   const AtomicOptions& tolerances) {
  const auto& lat = a.lattice();
  if (!(omega.lattice == lat)) throw std::invalid_argument("validate_atom: lattice mismatch");
  if (M < 0) throw std::invalid_argument("validate_atom: M must be nonnegative");
  const int K = M + 1;
  std::vector<double> sums(static_cast<std::size_t>(K) * K, 0.0);
  auto add = [&](const std::vector<double>& t) {
    for (std::size_t i = 0; i < t.size(); ++i) sums[i] += t[i];
  };
  if (pieces.empty()) {
    int ba = 0, bb = 0;
    double cells = -1.0;
    for (const auto& R : maximal_subrectangles(omega, MaximalMode::kAll))
      if (R.cells(lat) > cells) {
        cells = R.cells(lat);
        ba = R.x_level;
        bb = R.y_level;
      }
    SpectralField A = to_spectral(a);
    add(budget_terms(lat, A.coefficients(), ba, bb, M));
  } else {
    for (const auto& p : pieces) add(budget_terms(lat, p.spectrum.coefficients(), p.x_level,
                                                  p.y_level, M));
  }
  double best = 0.0;
  for (double s : sums) best = std::max(best, s);
  return assess_atom(a, omega, dilation, omega.measure() * best, tolerances);
}

double AtomicDecomposition::lambda_sum() const {
  double s = 0.0;
  for (const auto& L : levels) s += std::abs(L.lambda);
  return s;
}

GridFunction AtomicDecomposition::reconstruct(const LatticeSpec& lattice) const {
  GridFunction out(lattice);
  for (const auto& L : levels) {
    if (!(L.atom.lattice() == lattice))
      throw std::invalid_argument("reconstruct: atom lattice mismatch");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += L.lambda * L.atom[i];
  }
  return out;
}

SynthesisResult synthesize_level(const GridFunction& f, int level,
                                 const RectangleClassification& classes,
                                 const OpenSet& omega_tilde, const ScaleGrid& grid,
                                 const AtomicOptions& options) {
  auto acc = run_synthesis(f, classes, grid, options, {level}, true);
  return finish_level(f.lattice(), acc.at(level), omega_tilde);
}

AtomicDecomposition decompose(const GridFunction& f, const ScaleGrid& grid_in,
                              const AtomicOptions& options, const std::string& config_text) {
  const auto& lat = f.lattice();
  dyadic_depth(lat);
  ScaleGrid grid = grid_in;
  grid.bind(lat);

  AtomicDecomposition d;
  auto vals = f.values();
  std::uint64_t hsh = fnv1a(vals.data(), vals.size_bytes());
  hsh = fnv1a(config_text.data(), config_text.size(), hsh);
  d.source_hash = hex64(hsh);

  const auto S = S_heat(f, grid);
  d.s_heat_l1 = lp_norm(S.value, 1.0);
  double smax = 0.0;
  for (double v : S.value.values()) smax = std::max(smax, v);
  const double fnorm = lp_norm(f, 2.0);
  if (!(smax > 0.0)) {
    d.reconstruction_error = fnorm > 0.0 ? 1.0 : 0.0;
    d.notes.push_back("heat area function vanishes; no levels");
    return d;
  }
  d.level_max = options.level_max.value_or(static_cast<int>(std::ceil(std::log2(smax))));
  d.level_min = options.level_min.value_or(d.level_max - options.level_span);
  if (d.level_min > d.level_max) throw std::invalid_argument("decompose: empty level range");
  d.eps_trunc = std::ldexp(1.0, d.level_min) * lat.torus_volume();

  auto sets = level_sets(S, d.level_min, d.level_max);
  for (const auto& L : sets) d.layer_cake += std::ldexp(1.0, L.level) * L.omega.measure();

  // mass on the eta = 0 modes is outside the reach of every tent
  {
    auto ft = frequency_table(lat);
    SpectralField F = to_spectral(f);
    double axis = 0.0;
    for (std::size_t q = 0; q < F.size(); ++q)
      if (ft->eta_norm[q] == 0.0) axis += hermitian_weight(lat, q) * std::norm(F[q]);
    axis *= parseval_factor(lat);
    if (fnorm > 0.0 && axis > 1e-20 * fnorm * fnorm)
      d.notes.push_back("input carries mass on eta = 0, which no atom reproduces");
  }

  RectangleClassification classes(lat, sets);
  std::set<int> wanted;
  for (const auto& L : sets) wanted.insert(L.level);
  auto acc = run_synthesis(f, classes, grid, options, wanted, false);

  GridFunction rec(lat);
  for (auto& L : sets) {
    LevelData ld;
    ld.level = L.level;
    ld.rectangles = classes.rectangles(L.level);
    ld.rectangle_count = ld.rectangles.size();
    ld.omega_tilde = OpenSet(lat, strong_max_superlevel(lat, L.omega.mask, options.tilde_threshold));
    ld.omega = std::move(L.omega);
    auto r = finish_level(lat, acc.at(L.level), ld.omega_tilde);
    if (r.lambda == 0.0) {
      d.notes.push_back("level " + std::to_string(L.level) +
                        (ld.rectangle_count == 0 ? ": no labeled rectangles"
                                                 : ": labeled rectangles carry no energy") +
                        ", dropped");
      continue;
    }
    ld.lambda = r.lambda;
    ld.atom = std::move(r.atom);
    ld.budget = r.budget;
    ld.report = assess_atom(ld.atom, ld.omega_tilde, options.dilation, ld.budget, options);
    for (std::size_t i = 0; i < rec.size(); ++i) rec[i] += ld.lambda * ld.atom[i];
    d.levels.push_back(std::move(ld));
  }
  GridFunction diff(lat);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f[i] - rec[i];
  d.reconstruction_error = fnorm > 0.0 ? lp_norm(diff, 2.0) / fnorm : lp_norm(diff, 2.0);
  return d;
}

void write_decomposition(const std::filesystem::path& dir, const AtomicDecomposition& d) {
  std::filesystem::create_directories(dir);
  nlohmann::json man;
  man["source_hash"] = d.source_hash;
  man["reconstruction_error"] = d.reconstruction_error;
  man["s_heat_l1"] = d.s_heat_l1;
  man["layer_cake"] = d.layer_cake;
  man["eps_trunc"] = d.eps_trunc;
  man["level_min"] = d.level_min;
  man["level_max"] = d.level_max;
  man["lambda_sum"] = d.lambda_sum();
  man["notes"] = d.notes;
  man["levels"] = nlohmann::json::array();
  for (const auto& L : d.levels) {
    const std::string tag = std::to_string(L.level);
    write_grid_function(dir / ("level_" + tag), L.atom, {{"level", L.level}, {"lambda", L.lambda}});
    write_open_set(dir / ("omega_" + tag + ".rle"), L.omega);
    write_open_set(dir / ("omega_tilde_" + tag + ".rle"), L.omega_tilde);
    man["levels"].push_back({{"level", L.level},
                             {"lambda", L.lambda},
                             {"budget", L.budget},
                             {"rectangle_count", L.rectangle_count},
                             {"omega_measure", L.omega.measure()},
                             {"omega_tilde_measure", L.omega_tilde.measure()},
                             {"atom", "level_" + tag},
                             {"omega", "omega_" + tag + ".rle"},
                             {"omega_tilde", "omega_tilde_" + tag + ".rle"},
                             {"validation", report_json(L.report)}});
  }
  write_json(dir / "manifest.json", man);
}

AtomicDecomposition read_decomposition(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("read_decomposition: missing manifest in " + dir.string());
  nlohmann::json man = nlohmann::json::parse(in);
  AtomicDecomposition d;
  d.source_hash = man.at("source_hash").get<std::string>();
  d.reconstruction_error = man.at("reconstruction_error").get<double>();
  d.s_heat_l1 = man.at("s_heat_l1").get<double>();
  d.layer_cake = man.at("layer_cake").get<double>();
  d.eps_trunc = man.at("eps_trunc").get<double>();
  d.level_min = man.at("level_min").get<int>();
  d.level_max = man.at("level_max").get<int>();
  d.notes = man.at("notes").get<std::vector<std::string>>();
  for (const auto& e : man.at("levels")) {
    LevelData L;
    L.level = e.at("level").get<int>();
    L.lambda = e.at("lambda").get<double>();
    L.budget = e.at("budget").get<double>();
    L.rectangle_count = e.at("rectangle_count").get<std::size_t>();
    L.atom = read_grid_function(dir / e.at("atom").get<std::string>());
    L.omega = read_open_set(dir / e.at("omega").get<std::string>());
    L.omega_tilde = read_open_set(dir / e.at("omega_tilde").get<std::string>());
    const auto& v = e.at("validation");
    L.report.support_mass_inside = v.at("support_mass_inside").get<double>();
    L.report.l2_norm_ratio = v.at("l2_norm_ratio").get<double>();
    L.report.per_rectangle_budget = v.at("per_rectangle_budget").get<double>();
    L.report.passed = v.at("passed").get<bool>();
    d.levels.push_back(std::move(L));
  }
  return d;
}

}  // namespace flagwave
