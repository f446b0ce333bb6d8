#include <gtest/gtest.h>

#include <cmath>

#include "flagwave/harness.hpp"
#include "helpers.hpp"

using namespace flagwave;

namespace {

LatticeSpec lat32() { return make_lattice(1, 1, 32, 8.0); }

CorpusSpec small_spec() {
  CorpusSpec s;
  s.flag_gaussian = 2;
  s.band_limited = 1;
  s.synthetic_atom = 1;
  s.variants = 1;
  s.band_max = 6;
  s.sigma_min = 0.15;  // narrow enough for the decay margin on L = 8
  s.sigma_max = 0.3;
  return s;
}

}  // namespace

TEST(Corpus, DeterministicAndWellFormed) {
  auto a = gen_corpus(small_spec(), lat32());
  auto b = gen_corpus(small_spec(), lat32());
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    for (std::size_t c = 0; c < a[i].f.size(); ++c) ASSERT_EQ(a[i].f[c], b[i].f[c]);
    EXPECT_NEAR(fwtest::l2(a[i].f), 1.0, 1e-12) << a[i].name;
    auto m = moment_check(a[i].f);
    EXPECT_LE(m.eta_zero_energy, 1e-12) << a[i].name;
    EXPECT_LE(std::abs(m.mean), 1e-12) << a[i].name;
  }
  EXPECT_EQ(a[0].family, Family::kFlagGaussian);
  EXPECT_EQ(a.back().family, Family::kVariant);
  EXPECT_STREQ(family_name(Family::kBandLimitedRandom), "BandLimitedRandom");

  auto other = small_spec();
  other.seed += 1;
  auto c = gen_corpus(other, lat32());
  double diff = 0.0;
  for (std::size_t i = 0; i < c[0].f.size(); ++i) diff += std::abs(c[0].f[i] - a[0].f[i]);
  EXPECT_GT(diff, 0.0);
}

// A band-limited member sampled at two resolutions agrees at shared points.
TEST(Corpus, MembersAreResolutionIndependent) {
  auto coarse = gen_corpus(small_spec(), lat32());
  auto fine = gen_corpus(small_spec(), make_lattice(1, 1, 64, 8.0));
  ASSERT_EQ(coarse[2].family, Family::kBandLimitedRandom);
  double err = 0.0;
  for (int x = 0; x < 32; ++x)
    for (int y = 0; y < 32; ++y)
      err = std::max(err, std::abs(coarse[2].f[x * 32 + y] - fine[2].f[(2 * x) * 64 + 2 * y]));
  EXPECT_LT(err, 1e-12);
}

TEST(Corpus, EmptyAndInvalidSpecs) {
  CorpusSpec none = small_spec();
  none.flag_gaussian = none.band_limited = none.synthetic_atom = none.variants = 0;
  EXPECT_TRUE(gen_corpus(none, lat32()).empty());
  // the widest member needs 6 |(sigma1, sigma2)| <= L / 2
  EXPECT_THROW(gen_corpus(small_spec(), make_lattice(1, 1, 32, 4.0)), std::invalid_argument);
}

TEST(NormTable, RowsArePositiveAndOrdered) {
  auto corpus = gen_corpus(small_spec(), lat32());
  NormOptions opt{ScaleGrid(-1, 5, -1, 5).bind(lat32()), 1};
  auto t = norm_table(corpus, opt);
  ASSERT_EQ(t.rows.size(), corpus.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (double v : t.rows[r].norms) EXPECT_GT(v, 0.0);
    EXPECT_LE(t.rows[r].norms[3], t.rows[r].norms[2] * (1 + 1e-12));  // M+ <= M*
    EXPECT_LE(t.rows[r].norms[5], t.rows[r].norms[4] * (1 + 1e-12));  // u+ <= u*
    for (int a = 0; a < kNormCount; ++a)
      for (int b = 0; b < kNormCount; ++b)
        ASSERT_EQ(t.log_ratio(r, a, b), -t.log_ratio(r, b, a));
  }
  EXPECT_GE(t.c_emp(), 1.0);
  EXPECT_GE(t.ratio_bound(), 1.0);
  EXPECT_NE(t.to_csv().find("M_plus"), std::string::npos);
  EXPECT_EQ(t.to_json()["rows"].size(), corpus.size());

  EXPECT_THROW(norm_table({}, opt), std::invalid_argument);
  EXPECT_THROW(norm_table(corpus, {ScaleGrid(0, 2, 0, 2).bind(lat32()), 1}),
               std::invalid_argument);

  // workers only partition the members
  auto t4 = norm_table(corpus, {opt.grid, 4});
  for (std::size_t r = 0; r < t.rows.size(); ++r) EXPECT_EQ(t.rows[r].norms, t4.rows[r].norms);
}

TEST(NormTable, RowIsHomogeneousAndTranslationInvariant) {
  auto lat = lat32();
  auto grid = ScaleGrid(-1, 5, -1, 5).bind(lat);
  auto f = gen_corpus(small_spec(), lat)[0].f;
  auto base = norm_row(f, grid);
  GridFunction g(lat);
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = -2.5 * f[i];
  auto scaled = norm_row(g, grid);
  for (int a = 0; a < kNormCount; ++a) EXPECT_NEAR(scaled[a], 2.5 * base[a], 1e-10 * base[a]);
  std::vector<int> off{5, -3};
  auto moved = norm_row(shifted(f, off), grid);
  for (int a = 0; a < kNormCount; ++a) EXPECT_NEAR(moved[a], base[a], 1e-10 * base[a]) << a;
}

TEST(PlancherelPolya, SupDominatesInf) {
  auto lat = lat32();
  auto grid = ScaleGrid(-1, 5, -1, 5).bind(lat);
  auto f = gen_corpus(small_spec(), lat)[2].f;
  auto pair = build_lp_pair(Calibration::kDiscretelyRenormalized);
  auto r = pp_check(f, pair, grid, 2);
  EXPECT_GT(r.inf_norm, 0.0);
  EXPECT_GE(r.sup_norm, r.inf_norm);
  // cells finer than the grid hold one point each, so sup and inf coincide
  auto fine = pp_check(f, pair, grid, 20);
  EXPECT_EQ(fine.sup_norm, fine.inf_norm);
  EXPECT_LE(fine.sup_norm, r.sup_norm);
  EXPECT_GE(fine.inf_norm, r.inf_norm);
}

TEST(RandomOpenSet, ReproducibleAndNonEmpty) {
  auto lat = make_lattice(1, 1, 64, 1.0);
  for (std::uint64_t s = 1; s < 20; ++s) {
    auto a = random_open_set(lat, s), b = random_open_set(lat, s);
    EXPECT_EQ(a.mask, b.mask);
    EXPECT_FALSE(a.empty());
  }
}
