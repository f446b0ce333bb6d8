// Test-function corpus, the nine-norm comparison table and the sup/inf
// Plancherel-Polya comparison.
//
// Corpus members are defined on the continuous torus through their Fourier
// series, so the same member can be sampled at any N.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "flagwave/dyadic.hpp"
#include "flagwave/kernels.hpp"
#include "flagwave/lattice.hpp"
#include "flagwave/scale_grid.hpp"
#include "json.hpp"

namespace flagwave {

enum class Family { kFlagGaussian, kBandLimitedRandom, kSyntheticAtom, kVariant };

const char* family_name(Family f);

struct CorpusSpec {
  std::uint64_t seed = 20240611;
  int flag_gaussian = 8;
  int band_limited = 6;
  int synthetic_atom = 4;
  int variants = 6;
  double sigma_min = 0.3;   // Gaussian widths, physical units
  double sigma_max = 0.6;
  double decay_margin = 6.0;  // widths that must fit in half a period
  int band_max = 12;          // BandLimitedRandom: largest |q| per axis
};

struct CorpusMember {
  std::string name;
  Family family;
  GridFunction f;
};

// Throws std::invalid_argument when a family cannot meet its decay margin
// or a member fails the moment checks.
std::vector<CorpusMember> gen_corpus(const CorpusSpec& spec, const LatticeSpec& lattice);

// Relative energy of f on eta = 0 and the relative mean.
struct MomentCheck {
  double eta_zero_energy = 0.0;
  double mean = 0.0;
};
MomentCheck moment_check(const GridFunction& f);

constexpr int kNormCount = 9;
extern const std::array<const char*, kNormCount> kNormNames;

struct NormRow {
  std::string name;
  std::string family;
  std::array<double, kNormCount> norms{};
};

struct NormTable {
  std::vector<NormRow> rows;

  // log(norm_a / norm_b); antisymmetric in (a, b) exactly
  double log_ratio(std::size_t row, int a, int b) const;
  double ratio(std::size_t row, int a, int b) const;
  // max over pairs of (max over rows of the ratio) / (min over rows)
  double c_emp() const;
  // largest single ratio, so every ratio lies in [1/bound, bound]
  double ratio_bound() const;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct NormOptions {
  ScaleGrid grid;
  int workers = 1;
};

// Throws on an empty corpus or a grid without full coverage.
NormTable norm_table(const std::vector<CorpusMember>& corpus, const NormOptions& options);

std::array<double, kNormCount> norm_row(const GridFunction& f, const ScaleGrid& grid);

struct PPResult {
  double sup_norm = 0.0;
  double inf_norm = 0.0;
};

// Cells for block (j, k) are the dyadic cells of the block's tent class,
// made 2^cell_shift times finer per axis (at least one grid point).
PPResult pp_check(const GridFunction& f, const KernelPair& pair, const ScaleGrid& grid,
                  int cell_shift = 2);

// A union of 1..6 random axis-parallel rectangles (periodic), reproducible
// from the seed.
OpenSet random_open_set(const LatticeSpec& lattice, std::uint64_t seed);

}  // namespace flagwave
