// Dyadic scale sampling: t_j = 2^-j, s_k = 2^-k.
//
// With S samples per block, block j is sampled at 2^(-j + 1/2 - (i + 1/2)/S)
// for i = 0..S-1, each with weight ln2 / S; S = 1 gives the single midpoint
// t_j itself with weight ln 2.
#pragma once

#include <vector>

#include "flagwave/lattice.hpp"

namespace flagwave {

struct ScaleSample {
  int block;      // dyadic exponent j (or k)
  double value;   // t or s
  double weight;  // quadrature weight for dt/t
};

class ScaleGrid {
 public:
  ScaleGrid() = default;
  ScaleGrid(int j_min, int j_max, int k_min, int k_max, int samples_per_block = 1);

  // Records whether the LP supports of the sampled scales cover every
  // nonzero frequency radius of the lattice, in both factors.
  ScaleGrid& bind(const LatticeSpec& lattice);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int k_min() const { return k_min_; }
  int k_max() const { return k_max_; }
  int samples_per_block() const { return samples_; }
  double weight() const;
  bool full_coverage() const { return full_coverage_; }

  std::vector<ScaleSample> t_samples() const;
  std::vector<ScaleSample> s_samples() const;

  bool operator==(const ScaleGrid& o) const {
    return j_min_ == o.j_min_ && j_max_ == o.j_max_ && k_min_ == o.k_min_ &&
           k_max_ == o.k_max_ && samples_ == o.samples_;
  }

 private:
  std::vector<ScaleSample> samples(int lo, int hi) const;

  int j_min_ = -2, j_max_ = 7, k_min_ = -2, k_max_ = 7;
  int samples_ = 1;
  bool full_coverage_ = false;
};

}  // namespace flagwave
