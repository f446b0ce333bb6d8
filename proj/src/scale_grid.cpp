#include "flagwave/scale_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flagwave {

ScaleGrid::ScaleGrid(int j_min, int j_max, int k_min, int k_max, int samples_per_block)
    : j_min_(j_min), j_max_(j_max), k_min_(k_min), k_max_(k_max), samples_(samples_per_block) {
  if (j_min > j_max || k_min > k_max)
    throw std::invalid_argument("scale grid: empty range");
  if (samples_per_block < 1)
    throw std::invalid_argument("scale grid: samples_per_block must be >= 1");
}

double ScaleGrid::weight() const { return std::numbers::ln2 / samples_; }

std::vector<ScaleSample> ScaleGrid::samples(int lo, int hi) const {
  std::vector<ScaleSample> out;
  for (int j = lo; j <= hi; ++j)
    for (int i = 0; i < samples_; ++i) {
      double e = -j + 0.5 - (i + 0.5) / samples_;
      out.push_back({j, std::exp2(e), weight()});
    }
  return out;
}

std::vector<ScaleSample> ScaleGrid::t_samples() const { return samples(j_min_, j_max_); }
std::vector<ScaleSample> ScaleGrid::s_samples() const { return samples(k_min_, k_max_); }

ScaleGrid& ScaleGrid::bind(const LatticeSpec& lattice) {
  const double r_min = 2.0 * std::numbers::pi / lattice.L;
  const double r_top = std::numbers::pi * lattice.N / lattice.L;
  auto covers = [&](const std::vector<ScaleSample>& smp, double hi) {
    // consecutive samples are at most one octave apart, so the open
    // supports (1/(2t), 2/t) overlap and their union is one interval
    double t_max = smp.front().value, t_min = smp.back().value;
    return 0.5 / t_max < r_min && 2.0 / t_min > hi;
  };
  full_coverage_ = covers(t_samples(), r_top * std::sqrt(double(lattice.dims()))) &&
                   covers(s_samples(), r_top * std::sqrt(double(lattice.m)));
  return *this;
}

}  // namespace flagwave
