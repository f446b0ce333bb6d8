// Periodic sampling of R^n x R^m and the discrete Fourier contract.
//
// Axes are ordered (x_1..x_n, y_1..y_m); the last axis varies fastest.
// Forward transforms are unnormalized, inverse transforms divide by N^(n+m).
// Spectra are stored in half-complex form: the last axis keeps indices
// 0..N/2 only, the rest is implied by conjugate symmetry. On the other axes
// index i holds frequency q = i for i < N/2 and q = i - N for i >= N/2, so the
// frequency set per axis is {2 pi q / L : q in [-N/2, N/2)}. The last-axis
// index N/2 is the Nyquist frequency q = -N/2.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace flagwave {

template <typename T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}
  T* allocate(std::size_t n);
  void deallocate(T* p, std::size_t) noexcept;
  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const { return true; }
};

template <typename T>
T* AlignedAllocator<T>::allocate(std::size_t n) {
  void* p = ::operator new(n * sizeof(T), std::align_val_t(64));
  return static_cast<T*>(p);
}

template <typename T>
void AlignedAllocator<T>::deallocate(T* p, std::size_t) noexcept {
  ::operator delete(p, std::align_val_t(64));
}

using RealVector = std::vector<double, AlignedAllocator<double>>;
using ComplexVector =
    std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

struct LatticeSpec {
  int n = 1;
  int m = 1;
  int N = 8;
  double L = 1.0;

  int dims() const { return n + m; }
  double cell_width() const { return L / N; }
  double cell_volume() const;
  std::size_t size() const;           // N^(n+m)
  std::size_t spectral_size() const;  // N^(n+m-1) * (N/2+1)
  double torus_volume() const;
  bool operator==(const LatticeSpec& o) const {
    return n == o.n && m == o.m && N == o.N && L == o.L;
  }
};

LatticeSpec make_lattice(int n, int m, int N, double L);

class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const LatticeSpec& lattice);
  GridFunction(const LatticeSpec& lattice, RealVector values);

  const LatticeSpec& lattice() const { return lattice_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  LatticeSpec lattice_;
  RealVector values_;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const LatticeSpec& lattice);

  const LatticeSpec& lattice() const { return lattice_; }
  std::span<std::complex<double>> coefficients() { return coeffs_; }
  std::span<const std::complex<double>> coefficients() const { return coeffs_; }
  std::complex<double>& operator[](std::size_t i) { return coeffs_[i]; }
  std::complex<double> operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }

 private:
  LatticeSpec lattice_;
  ComplexVector coeffs_;
};

SpectralField to_spectral(const GridFunction& f);
GridFunction to_physical(const SpectralField& F);

// Inverse transform that consumes its input buffer; `out` must already have
// the lattice shape. Avoids the copy made by to_physical in hot loops.
void to_physical_destructive(const LatticeSpec& lattice,
                             std::span<std::complex<double>> coeffs, GridFunction& out);

// Multiplicity of each stored coefficient in the full spectrum (1 or 2).
double hermitian_weight(const LatticeSpec& lattice, std::size_t index);

// Sum of |F|^2 over the full (implied) spectrum.
double spectral_energy(const SpectralField& F);

// cell_volume * sum |f|^2 = spectral_energy(F) * cell_volume / N^(n+m).
double parseval_factor(const LatticeSpec& lattice);

// p in {1, 2, inf}. Sums are taken over sorted magnitudes, so the value is
// invariant under any permutation of the samples, shifts included.
double lp_norm(const GridFunction& f, double p);

GridFunction shifted(const GridFunction& f, std::span<const int> cells);

// Per-mode frequency data for the half spectrum, cached per lattice.
struct FrequencyTable {
  LatticeSpec lattice;
  std::vector<int> q;          // spectral_size * dims, integer frequencies
  RealVector zeta_norm;        // |(xi, eta)|
  RealVector eta_norm;         // |eta|
  std::vector<std::uint8_t> nyquist;  // bit a set when axis a sits at q = -N/2

  double omega(std::size_t index, int axis) const;
  int q_at(std::size_t index, int axis) const {
    return q[index * lattice.dims() + axis];
  }
};

std::shared_ptr<const FrequencyTable> frequency_table(const LatticeSpec& lattice);

// Unravel a flat physical index into per-axis coordinates.
void unravel(const LatticeSpec& lattice, std::size_t index, std::span<int> coords);

}  // namespace flagwave
