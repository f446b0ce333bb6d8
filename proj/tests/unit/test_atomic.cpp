#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "flagwave/atomic.hpp"
#include "flagwave/harness.hpp"
#include "helpers.hpp"

using namespace flagwave;

namespace {

LatticeSpec lat32() { return make_lattice(1, 1, 32, 8.0); }
ScaleGrid grid32() { return ScaleGrid(-1, 5, -1, 5).bind(lat32()); }

GridFunction corpus_member(int index) {
  CorpusSpec spec;
  spec.flag_gaussian = 2;
  spec.band_limited = 1;
  spec.synthetic_atom = 1;
  spec.variants = 0;
  spec.band_max = 6;
  spec.sigma_min = 0.15;
  spec.sigma_max = 0.3;
  return gen_corpus(spec, lat32()).at(index).f;
}

}  // namespace

TEST(Atomic, LevelSetsAreNestedAndClassificationMatchesCounts) {
  auto lat = lat32();
  auto S = S_heat(corpus_member(0), grid32());
  double mx = 0.0;
  for (double v : S.value.values()) mx = std::max(mx, v);
  const int top = static_cast<int>(std::ceil(std::log2(mx)));
  auto levels = level_sets(S, top - 8, top);
  ASSERT_GE(levels.size(), 2u);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    EXPECT_GT(levels[i].level, levels[i - 1].level);
    for (std::size_t c = 0; c < lat.size(); ++c)
      if (levels[i].omega.mask[c]) ASSERT_TRUE(levels[i - 1].omega.mask[c]);
  }
  EXPECT_THROW(level_sets(S, 3, 2), std::invalid_argument);

  // oracle: label of each rectangle by direct counting, class (1, 3)
  auto classes = classify_rectangles(levels, lat);
  const int a = 1, b = 3, N = lat.N;
  const auto& lab = classes.labels(a, b);
  std::size_t idx = 0;
  for (int x = 0; x < N; x += 1 << a)
    for (int y = 0; y < N; y += 1 << b, ++idx) {
      int want = RectangleClassification::kUnlabeled;
      for (const auto& L : levels) {
        int c = 0;
        for (int u = x; u < x + (1 << a); ++u)
          for (int v = y; v < y + (1 << b); ++v) c += L.omega.mask[u * N + v];
        if (2 * c > (1 << (a + b))) want = L.level;
      }
      ASSERT_EQ(lab[idx], want);
    }
  EXPECT_THROW(classes.labels(3, 1), std::out_of_range);
  std::size_t total = 0;
  for (const auto& L : levels) total += classes.count(L.level);
  EXPECT_GT(total, 0u);
}

TEST(Atomic, TentClassConvention) {
  auto lat = make_lattice(1, 1, 64, 8.0);  // h = 1/8
  EXPECT_EQ(tent_class(lat, 0, 0), std::make_pair(3, 3));
  EXPECT_EQ(tent_class(lat, 2, 0), std::make_pair(1, 3));  // l(J) = max(t, s)
  EXPECT_EQ(tent_class(lat, 0, 2), std::make_pair(3, 3));
  EXPECT_EQ(tent_class(lat, 9, 9), std::make_pair(0, 0));
  EXPECT_EQ(tent_class(lat, -9, 0), std::make_pair(6, 6));
}

// Oracle: mark every enlarged rectangle directly.
TEST(Atomic, DilateMatchesDirectEnlargement) {
  auto lat = make_lattice(1, 1, 32, 4.0);
  const int N = lat.N;
  for (std::uint64_t seed : {3u, 4u, 5u}) {
    auto omega = random_open_set(lat, seed);
    for (double dil : {1.0, 3.0, 10.0}) {
      std::vector<std::uint8_t> want(lat.size(), 0);
      for (int a = 0; a <= 5; ++a)
        for (int b = 0; b <= 5; ++b)
          for (int x = 0; x < N; x += 1 << a)
            for (int y = 0; y < N; y += 1 << b) {
              bool full = true;
              for (int u = x; u < x + (1 << a) && full; ++u)
                for (int v = y; v < y + (1 << b); ++v)
                  if (!omega.mask[u * N + v]) {
                    full = false;
                    break;
                  }
              if (!full) continue;
              auto span = [&](int p, int w) {
                int e = static_cast<int>(std::floor((dil - 1.0) / 2.0 * w + 1e-12));
                std::vector<int> cells;
                if (w + 2 * e >= N)
                  for (int c = 0; c < N; ++c) cells.push_back(c);
                else
                  for (int c = p - e; c <= p + w - 1 + e; ++c) cells.push_back((c + N) % N);
                return cells;
              };
              for (int u : span(x, 1 << a))
                for (int v : span(y, 1 << b)) want[u * N + v] = 1;
            }
      EXPECT_EQ(dilate_open_set(omega, dil), want) << seed << " " << dil;
    }
  }
  EXPECT_THROW(dilate_open_set(random_open_set(lat, 1), 0.5), std::invalid_argument);
}

// A constructed atom: (l_I^2 Lap_z)(l_J^2 Lap_y) of a bump centred in a
// small dyadic square, scaled to the size condition.
TEST(Atomic, ConstructedAtomPasses) {
  auto lat = make_lattice(1, 1, 64, 8.0);
  const int N = lat.N;
  std::vector<std::uint8_t> m(lat.size(), 0);
  for (int x = 16; x < 20; ++x)
    for (int y = 16; y < 20; ++y) m[x * N + y] = 1;
  OpenSet omega(lat, m);
  const double l = 4 * lat.cell_width(), cx = 18 * lat.cell_width(), sg = 0.1;
  GridFunction phi(lat);
  std::vector<int> c(2);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    unravel(lat, i, c);
    double dx = c[0] * lat.cell_width() - cx, dy = c[1] * lat.cell_width() - cx;
    phi[i] = std::exp(-(dx * dx + dy * dy) / (2 * sg * sg));
  }
  auto ft = frequency_table(lat);
  SpectralField P = to_spectral(phi);
  for (std::size_t q = 0; q < P.size(); ++q)
    P[q] *= l * l * ft->zeta_norm[q] * ft->zeta_norm[q] * l * l * ft->eta_norm[q] *
            ft->eta_norm[q];
  auto a = to_physical(P);
  const double scale = 0.5 / (fwtest::l2(a) * std::sqrt(omega.measure()));
  for (double& v : a.values()) v *= scale;
  for (auto& v : P.coefficients()) v *= scale;

  std::vector<AtomPiece> pieces{{2, 2, P}};
  AtomicOptions tol;
  auto rep = validate_atom(a, omega, 1, 10.0, pieces, tol);
  EXPECT_GE(rep.support_mass_inside, 0.99);
  EXPECT_NEAR(rep.l2_norm_ratio, 0.5, 1e-12);
  EXPECT_LE(rep.per_rectangle_budget, tol.budget_tolerance);
  EXPECT_TRUE(rep.passed);

  // the same bump moved far from omega fails the support test
  std::vector<int> off{32, 32};
  auto far = validate_atom(shifted(a, off), omega, 1, 10.0, pieces, tol);
  EXPECT_LT(far.support_mass_inside, 0.01);
  EXPECT_FALSE(far.passed);
  EXPECT_THROW(validate_atom(a, omega, -1, 10.0), std::invalid_argument);
}

TEST(Atomic, DecomposeReconstructsAndObeysTheLayerCake) {
  auto lat = lat32();
  for (int member : {0, 2, 3}) {
    auto f = corpus_member(member);
    auto d = decompose(f, grid32());
    ASSERT_FALSE(d.levels.empty());
    EXPECT_LE(d.reconstruction_error, 5e-2);
    EXPECT_LT(fwtest::rel_l2(d.reconstruct(lat), f), 5e-2);
    EXPECT_GT(d.lambda_sum(), 0.0);
    // layer cake: sum 2^l |Omega_l| within [||S||_1 - eps, 2 ||S||_1]
    EXPECT_LE(d.layer_cake, 2.0 * d.s_heat_l1);
    EXPECT_GE(d.layer_cake, d.s_heat_l1 - d.eps_trunc);
    for (const auto& L : d.levels) EXPECT_GE(L.report.support_mass_inside, 0.99) << L.level;
    EXPECT_FALSE(d.source_hash.empty());
  }
}

TEST(Atomic, DecompositionRoundTripAndZeroInput) {
  auto lat = lat32();
  auto f = corpus_member(1);
  auto d = decompose(f, grid32(), {}, "cfg");
  auto dir = std::filesystem::temp_directory_path() / "flagwave_test_decomp";
  std::filesystem::remove_all(dir);
  write_decomposition(dir, d);
  auto back = read_decomposition(dir);
  ASSERT_EQ(back.levels.size(), d.levels.size());
  EXPECT_EQ(back.source_hash, d.source_hash);
  EXPECT_EQ(back.lambda_sum(), d.lambda_sum());
  auto r1 = d.reconstruct(lat), r2 = back.reconstruct(lat);
  for (std::size_t i = 0; i < r1.size(); ++i) ASSERT_EQ(r1[i], r2[i]);
  std::filesystem::remove_all(dir);

  // same input and config text give the same hash, a different config does not
  EXPECT_EQ(decompose(f, grid32(), {}, "cfg").source_hash, d.source_hash);
  EXPECT_NE(decompose(f, grid32(), {}, "other").source_hash, d.source_hash);

  auto z = decompose(GridFunction(lat), grid32());
  EXPECT_TRUE(z.levels.empty());
  EXPECT_EQ(z.lambda_sum(), 0.0);
}
