// Dyadic rectangles on the grid, open sets as cell masks, maximal dyadic
// subrectangles and the Journe enlargement factors.
//
// A rectangle of class (x_level, y_level) has side 2^x_level cells on every
// x axis and 2^y_level cells on every y axis; its anchor is the cell index
// of its lower corner, a multiple of the side on each axis. Rectangles never
// wrap around the torus. The lattice size N must be a power of two.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "flagwave/lattice.hpp"

namespace flagwave {

struct DyadicRectangle {
  int x_level = 0;
  int y_level = 0;
  std::vector<int> anchor;  // cells, one entry per axis

  double side_x(const LatticeSpec& lat) const { return lat.cell_width() * (1 << x_level); }
  double side_y(const LatticeSpec& lat) const { return lat.cell_width() * (1 << y_level); }
  double cells(const LatticeSpec& lat) const;
  double measure(const LatticeSpec& lat) const { return cells(lat) * lat.cell_volume(); }
  bool operator==(const DyadicRectangle& o) const {
    return x_level == o.x_level && y_level == o.y_level && anchor == o.anchor;
  }
  bool operator<(const DyadicRectangle& o) const;
};

struct OpenSet {
  LatticeSpec lattice;
  std::vector<std::uint8_t> mask;

  OpenSet() = default;
  OpenSet(const LatticeSpec& lat, std::vector<std::uint8_t> m);
  std::size_t cell_count() const;
  double measure() const { return cell_count() * lattice.cell_volume(); }
  bool empty() const { return cell_count() == 0; }
};

int dyadic_depth(const LatticeSpec& lattice);  // log2 N; throws if N is not 2^k

// Cell counts of a mask over every dyadic rectangle, by class.
class CountPyramid {
 public:
  CountPyramid(const LatticeSpec& lattice, const std::vector<std::uint8_t>& mask);

  int depth() const { return depth_; }
  const LatticeSpec& lattice() const { return lattice_; }
  // counts for class (a, b), row-major over anchor coordinates in units of
  // the class sides
  const std::vector<std::uint32_t>& counts(int a, int b) const;
  std::size_t anchor_index(int a, int b, const std::vector<int>& cell_anchor) const;
  std::vector<int> anchor_cells(int a, int b, std::size_t index) const;
  std::uint32_t count(const DyadicRectangle& R) const;
  bool full(const DyadicRectangle& R) const;
  std::uint64_t class_cells(int a, int b) const;
  std::size_t class_size(int a, int b) const { return counts(a, b).size(); }

 private:
  LatticeSpec lattice_;
  int depth_ = 0;
  std::vector<std::vector<std::uint32_t>> levels_;
};

enum class MaximalMode { kAll, kXMaximal, kYMaximal };

std::vector<DyadicRectangle> maximal_subrectangles(const OpenSet& omega, MaximalMode mode);

// {M_s(chi_Omega) > 1/2} and the enlargement factors measured against it.
class JourneContext {
 public:
  explicit JourneContext(const OpenSet& omega);
  const OpenSet& dilate() const { return tilde_; }
  // sup |l|/|I| over dyadic l containing I with l x J inside the dilate
  // (direction 1), or the same in y (direction 2); 1 if nothing fits.
  double gamma(const DyadicRectangle& R, int direction) const;

 private:
  OpenSet omega_;
  OpenSet tilde_;
  CountPyramid tilde_counts_;
};

double journe_gamma(const DyadicRectangle& R, const OpenSet& omega, int direction);

struct JourneRatios {
  double m2_gamma1 = 0.0;  // sum over m2(Omega) of |R| gamma1^-delta / |Omega|
  double m1_gamma2 = 0.0;  // sum over m1(Omega) of |R| gamma2^-delta / |Omega|
};

JourneRatios journe_sum_check(const OpenSet& omega, double delta);

void write_open_set(const std::filesystem::path& path, const OpenSet& omega);
OpenSet read_open_set(const std::filesystem::path& path);

}  // namespace flagwave
