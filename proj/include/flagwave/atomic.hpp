// Atomic decomposition driven by the heat area function: level sets,
// rectangle classes, tent synthesis, atom validation and reconstruction.
//
// Tents: the scale pair (t, s) = (2^-j, 2^-k) belongs to rectangles with
// l(I) = t and l(J) = max(t, s), converted to cells and clamped to
// [1, N]. Every scale pair therefore has exactly one rectangle class, and
// l(J) >= l(I) always holds.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flagwave/dyadic.hpp"
#include "flagwave/kernels.hpp"
#include "flagwave/scale_grid.hpp"
#include "flagwave/square.hpp"
#include "json.hpp"

namespace flagwave {

struct AtomicOptions {
  int M = 1;
  double dilation = 10.0;
  double tilde_threshold = 0.1;
  int level_span = 24;  // level_min = level_max - level_span
  std::optional<int> level_min, level_max;
  Calibration calibration = Calibration::kDiscretelyRenormalized;
  double support_threshold = 0.99;
  double l2_tolerance = 100.0;
  double budget_tolerance = 1.0e4;  // squared quantity: l2_tolerance^2
};

struct LevelSet {
  int level;
  OpenSet omega;
};

// Nested sets {S > 2^l}, ascending in l; empty levels are dropped.
std::vector<LevelSet> level_sets(const SquareFunctionResult& S, int level_min, int level_max);

// Per-class labels: label(R) is the largest level whose set meets R in more
// than half of R, or kUnlabeled.
class RectangleClassification {
 public:
  static constexpr int kUnlabeled = INT32_MIN;

  RectangleClassification(const LatticeSpec& lattice, const std::vector<LevelSet>& levels);

  const LatticeSpec& lattice() const { return lattice_; }
  int depth() const { return depth_; }
  // class (a, b) requires b >= a
  const std::vector<int>& labels(int a, int b) const;
  std::vector<DyadicRectangle> rectangles(int level) const;
  std::size_t count(int level) const;
  // label of the class-(a, b) rectangle containing each cell
  std::vector<int> cell_labels(int a, int b) const;

 private:
  LatticeSpec lattice_;
  int depth_;
  std::vector<std::vector<int>> labels_;
};

RectangleClassification classify_rectangles(const std::vector<LevelSet>& levels,
                                             const LatticeSpec& lattice);

// Rectangle class of the scale pair (2^-j, 2^-k).
std::pair<int, int> tent_class(const LatticeSpec& lattice, int j, int k);

struct AtomValidationReport {
  double support_mass_inside = 1.0;
  double l2_norm_ratio = 0.0;
  double per_rectangle_budget = 0.0;
  bool passed = true;
};

nlohmann::json report_json(const AtomValidationReport& r);

struct AtomPiece {
  int x_level;
  int y_level;
  SpectralField spectrum;
};

// Union of the dilation-fold concentric enlargements of the dyadic
// rectangles inside omega.
std::vector<std::uint8_t> dilate_open_set(const OpenSet& omega, double dilation);

// Budget: max over k1, k2 in 0..M of
//   |omega| * sum over pieces of ||(l_I^2 D1)^(k1-M) (l_J^2 D2)^(k2-M) piece||^2.
// Without pieces the whole atom is one piece on the largest rectangle of omega.
AtomValidationReport validate_atom(const GridFunction& a, const OpenSet& omega, int M,
                                   double dilation, const std::vector<AtomPiece>& pieces = {},
                                   const AtomicOptions& tolerances = {});

// Support and L2 checks of an atom against omega, with a budget computed
// elsewhere; passed compares all three with the tolerances.
AtomValidationReport assess_atom(const GridFunction& a, const OpenSet& omega, double dilation,
                                 double budget, const AtomicOptions& tolerances);

struct LevelData {
  int level;
  OpenSet omega;
  OpenSet omega_tilde;
  std::vector<DyadicRectangle> rectangles;
  std::size_t rectangle_count = 0;
  double lambda = 0.0;
  GridFunction atom;
  double budget = 0.0;
  AtomValidationReport report;
};

struct AtomicDecomposition {
  std::vector<LevelData> levels;
  std::string source_hash;
  double reconstruction_error = 0.0;
  double s_heat_l1 = 0.0;
  double layer_cake = 0.0;
  double eps_trunc = 0.0;
  int level_min = 0;
  int level_max = 0;
  std::vector<std::string> notes;  // degenerate levels and similar

  double lambda_sum() const;
  GridFunction reconstruct(const LatticeSpec& lattice) const;
};

// One level's (lambda, atom, budget); empty classification gives lambda 0.
struct SynthesisResult {
  double lambda = 0.0;
  GridFunction atom;
  double budget = 0.0;
  std::vector<AtomPiece> pieces;
};

SynthesisResult synthesize_level(const GridFunction& f, int level,
                                 const RectangleClassification& classes,
                                 const OpenSet& omega_tilde, const ScaleGrid& grid,
                                 const AtomicOptions& options = {});

AtomicDecomposition decompose(const GridFunction& f, const ScaleGrid& grid,
                              const AtomicOptions& options = {},
                              const std::string& config_text = "");

void write_decomposition(const std::filesystem::path& dir, const AtomicDecomposition& d);
AtomicDecomposition read_decomposition(const std::filesystem::path& dir);

}  // namespace flagwave
