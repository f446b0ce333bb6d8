// Discrete section of the cone {|x - x1| <= t, |y - y1| <= t + s} at one
// scale pair. The area integrals average over it and the non-tangential
// maximal function takes its supremum over it, through the same windows.
#pragma once

#include <cstddef>
#include <vector>

#include "flagwave/lattice.hpp"

namespace flagwave {

struct AxisWindow {
  std::size_t before = 0;
  std::size_t after = 0;
  std::size_t length() const { return before + after + 1; }
};

struct ConeSection {
  std::vector<AxisWindow> axes;  // one per lattice axis
  double cell_count() const;
};

// Half-widths floor(t/h) on x axes and floor((t+s)/h) on y axes. A window
// that would reach around the torus is clipped to exactly one period.
ConeSection cone_section(const LatticeSpec& lattice, double t, double s);

// Periodic window clipped to the line length.
AxisWindow clip_window(std::size_t before, std::size_t after, int N);

// In place: each value becomes the sum / max over its section.
void window_sum_inplace(GridFunction& g, const ConeSection& c);
void window_max_inplace(GridFunction& g, const ConeSection& c);

}  // namespace flagwave
