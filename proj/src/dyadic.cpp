#include "flagwave/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flagwave/io.hpp"
#include "flagwave/maximal.hpp"

namespace flagwave {

double DyadicRectangle::cells(const LatticeSpec& lat) const {
  return std::ldexp(1.0, x_level * lat.n + y_level * lat.m);
}

bool DyadicRectangle::operator<(const DyadicRectangle& o) const {
  if (x_level != o.x_level) return x_level < o.x_level;
  if (y_level != o.y_level) return y_level < o.y_level;
  return anchor < o.anchor;
}

OpenSet::OpenSet(const LatticeSpec& lat, std::vector<std::uint8_t> m)
    : lattice(lat), mask(std::move(m)) {
  if (mask.size() != lattice.size()) throw std::invalid_argument("open set: mask shape");
}

std::size_t OpenSet::cell_count() const {
  std::size_t c = 0;
  for (auto v : mask) c += v != 0;
  return c;
}

int dyadic_depth(const LatticeSpec& lattice) {
  int d = 0;
  while ((1 << d) < lattice.N) ++d;
  if ((1 << d) != lattice.N) throw std::invalid_argument("dyadic geometry needs N = 2^k");
  return d;
}

namespace {

std::vector<std::uint32_t> pool_axis(const std::vector<std::uint32_t>& src,
                                     std::vector<int>& shape, int axis) {
  std::size_t outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= shape[a];
  for (std::size_t a = axis + 1; a < shape.size(); ++a) inner *= shape[a];
  const std::size_t len = shape[axis], half = len / 2;
  std::vector<std::uint32_t> dst(outer * half * inner);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < half; ++i)
      for (std::size_t c = 0; c < inner; ++c)
        dst[(o * half + i) * inner + c] =
            src[(o * len + 2 * i) * inner + c] + src[(o * len + 2 * i + 1) * inner + c];
  shape[axis] = static_cast<int>(half);
  return dst;
}

}  // namespace

CountPyramid::CountPyramid(const LatticeSpec& lattice, const std::vector<std::uint8_t>& mask)
    : lattice_(lattice), depth_(dyadic_depth(lattice)) {
  if (mask.size() != lattice.size()) throw std::invalid_argument("pyramid: mask shape");
  const int D = depth_ + 1;
  levels_.resize(static_cast<std::size_t>(D) * D);
  std::vector<std::uint32_t> x(mask.begin(), mask.end());
  for (auto& v : x) v = v ? 1 : 0;
  std::vector<int> xshape(lattice.dims(), lattice.N);
  for (int a = 0; a <= depth_; ++a) {
    if (a > 0)
      for (int ax = 0; ax < lattice.n; ++ax) x = pool_axis(x, xshape, ax);
    auto y = x;
    auto yshape = xshape;
    for (int b = 0; b <= depth_; ++b) {
      if (b > 0)
        for (int ax = lattice.n; ax < lattice.dims(); ++ax) y = pool_axis(y, yshape, ax);
      levels_[a * D + b] = y;
    }
  }
}

const std::vector<std::uint32_t>& CountPyramid::counts(int a, int b) const {
  if (a < 0 || b < 0 || a > depth_ || b > depth_)
    throw std::out_of_range("pyramid: class out of range");
  return levels_[a * (depth_ + 1) + b];
}

std::uint64_t CountPyramid::class_cells(int a, int b) const {
  return std::uint64_t{1} << (a * lattice_.n + b * lattice_.m);
}

std::size_t CountPyramid::anchor_index(int a, int b, const std::vector<int>& cell) const {
  std::size_t idx = 0;
  for (int ax = 0; ax < lattice_.dims(); ++ax) {
    int lvl = ax < lattice_.n ? a : b;
    int ext = lattice_.N >> lvl;
    int c = cell[ax] >> lvl;
    if (cell[ax] < 0 || c >= ext || (c << lvl) != cell[ax])
      throw std::out_of_range("pyramid: anchor not on the dyadic grid");
    idx = idx * ext + c;
  }
  return idx;
}

std::vector<int> CountPyramid::anchor_cells(int a, int b, std::size_t index) const {
  std::vector<int> cell(lattice_.dims());
  for (int ax = lattice_.dims() - 1; ax >= 0; --ax) {
    int lvl = ax < lattice_.n ? a : b;
    int ext = lattice_.N >> lvl;
    cell[ax] = static_cast<int>(index % ext) << lvl;
    index /= ext;
  }
  return cell;
}

std::uint32_t CountPyramid::count(const DyadicRectangle& R) const {
  return counts(R.x_level, R.y_level)[anchor_index(R.x_level, R.y_level, R.anchor)];
}

bool CountPyramid::full(const DyadicRectangle& R) const {
  return count(R) == class_cells(R.x_level, R.y_level);
}

namespace {

DyadicRectangle grow(const DyadicRectangle& R, int direction, int levels, int n) {
  DyadicRectangle P = R;
  if (direction == 1) P.x_level += levels;
  else P.y_level += levels;
  for (std::size_t ax = 0; ax < P.anchor.size(); ++ax) {
    bool is_x = static_cast<int>(ax) < n;
    if (is_x != (direction == 1)) continue;
    int lvl = is_x ? P.x_level : P.y_level;
    P.anchor[ax] = (P.anchor[ax] >> lvl) << lvl;
  }
  return P;
}

}  // namespace

std::vector<DyadicRectangle> maximal_subrectangles(const OpenSet& omega, MaximalMode mode) {
  std::vector<DyadicRectangle> out;
  if (omega.empty()) return out;
  CountPyramid P(omega.lattice, omega.mask);
  const int D = P.depth();
  const int n = omega.lattice.n;
  for (int a = 0; a <= D; ++a) {
    for (int b = 0; b <= D; ++b) {
      const auto& cnt = P.counts(a, b);
      const auto full = P.class_cells(a, b);
      for (std::size_t i = 0; i < cnt.size(); ++i) {
        if (cnt[i] != full) continue;
        DyadicRectangle R{a, b, P.anchor_cells(a, b, i)};
        bool x_max = a == D || !P.full(grow(R, 1, 1, n));
        bool y_max = b == D || !P.full(grow(R, 2, 1, n));
        bool keep = mode == MaximalMode::kAll       ? (x_max && y_max)
                    : mode == MaximalMode::kXMaximal ? x_max
                                                     : y_max;
        if (keep) out.push_back(std::move(R));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

JourneContext::JourneContext(const OpenSet& omega)
    : omega_(omega),
      tilde_(omega.lattice, strong_max_superlevel(omega.lattice, omega.mask, 0.5)),
      tilde_counts_(omega.lattice, tilde_.mask) {}

double JourneContext::gamma(const DyadicRectangle& R, int direction) const {
  if (direction != 1 && direction != 2) throw std::invalid_argument("gamma: direction is 1 or 2");
  const auto& lat = omega_.lattice;
  const int D = tilde_counts_.depth();
  if (R.x_level < 0 || R.y_level < 0 || R.x_level > D || R.y_level > D ||
      static_cast<int>(R.anchor.size()) != lat.dims())
    throw std::out_of_range("gamma: rectangle outside the domain");
  tilde_counts_.anchor_index(R.x_level, R.y_level, R.anchor);  // validates the anchor
  const int level = direction == 1 ? R.x_level : R.y_level;
  const int dim = direction == 1 ? lat.n : lat.m;
  int best = 0;
  for (int up = 1; level + up <= D; ++up) {
    if (!tilde_counts_.full(grow(R, direction, up, lat.n))) break;
    best = up;
  }
  return std::ldexp(1.0, best * dim);
}

double journe_gamma(const DyadicRectangle& R, const OpenSet& omega, int direction) {
  return JourneContext(omega).gamma(R, direction);
}

JourneRatios journe_sum_check(const OpenSet& omega, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("journe: delta must be positive");
  JourneRatios out;
  if (omega.empty()) return out;
  JourneContext ctx(omega);
  const auto& lat = omega.lattice;
  const double area = static_cast<double>(omega.cell_count());
  for (const auto& R : maximal_subrectangles(omega, MaximalMode::kYMaximal))
    out.m2_gamma1 += R.cells(lat) * std::pow(ctx.gamma(R, 1), -delta);
  for (const auto& R : maximal_subrectangles(omega, MaximalMode::kXMaximal))
    out.m1_gamma2 += R.cells(lat) * std::pow(ctx.gamma(R, 2), -delta);
  out.m2_gamma1 /= area;
  out.m1_gamma2 /= area;
  return out;
}

void write_open_set(const std::filesystem::path& path, const OpenSet& omega) {
  write_mask(path, omega.lattice, omega.mask);
}

OpenSet read_open_set(const std::filesystem::path& path) {
  LatticeSpec lat;
  auto mask = read_mask(path, &lat);
  return OpenSet(lat, std::move(mask));
}

}  // namespace flagwave
