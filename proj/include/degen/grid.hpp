#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

namespace degen {

/// Periodic box [-L, L)^n sampled by N points per axis, with the matching
/// frequency lattice xi_k = (pi/L) k, k in [-N/2, N/2).
///
/// Flat indices are row-major with the first axis slowest. Spectral arrays
/// use FFT order per axis: m = 0..N/2-1 holds k = m, m = N/2..N-1 holds
/// k = m - N.
class SpectralGrid {
 public:
  static SpectralGrid create(int dim, int points, double half_length);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double half_length() const noexcept { return half_length_; }

  std::size_t size() const noexcept {
    return dim_ == 1 ? static_cast<std::size_t>(points_)
                     : static_cast<std::size_t>(points_) * static_cast<std::size_t>(points_);
  }

  double dx() const noexcept { return 2.0 * half_length_ / points_; }
  double dxi() const noexcept { return std::numbers::pi / half_length_; }
  /// Cell volume dx^n.
  double cell_volume() const noexcept { return dim_ == 1 ? dx() : dx() * dx(); }
  /// Spectral quadrature weight (dxi / 2pi)^n = (1 / 2L)^n.
  double spectral_weight() const noexcept {
    const double w = 1.0 / (2.0 * half_length_);
    return dim_ == 1 ? w : w * w;
  }
  /// Largest |xi_j| on the lattice, (N/2) pi / L.
  double xi_max() const noexcept { return 0.5 * points_ * dxi(); }

  double node(int i) const noexcept { return -half_length_ + dx() * i; }
  int wavenumber(int m) const noexcept { return m < points_ / 2 ? m : m - points_; }
  double frequency(int m) const noexcept { return dxi() * wavenumber(m); }
  /// Inverse of wavenumber(): FFT-order slot of signed wavenumber k.
  int slot(int k) const noexcept { return k >= 0 ? k : k + points_; }

  std::array<int, 2> unflatten(std::size_t idx) const noexcept {
    if (dim_ == 1) return {static_cast<int>(idx), 0};
    return {static_cast<int>(idx / points_), static_cast<int>(idx % points_)};
  }
  std::size_t flatten(int i0, int i1 = 0) const noexcept {
    return dim_ == 1 ? static_cast<std::size_t>(i0)
                     : static_cast<std::size_t>(i0) * points_ + static_cast<std::size_t>(i1);
  }

  /// Physical position of flat node idx (unused components are zero).
  std::array<double, 2> position(std::size_t idx) const noexcept {
    const auto [a, b] = unflatten(idx);
    return {node(a), dim_ == 2 ? node(b) : 0.0};
  }
  /// Frequency vector of flat spectral slot idx.
  std::array<double, 2> wavevector(std::size_t idx) const noexcept {
    const auto [a, b] = unflatten(idx);
    return {frequency(a), dim_ == 2 ? frequency(b) : 0.0};
  }
  std::array<int, 2> wavenumbers(std::size_t idx) const noexcept {
    const auto [a, b] = unflatten(idx);
    return {wavenumber(a), dim_ == 2 ? wavenumber(b) : 0};
  }

  bool operator==(const SpectralGrid&) const = default;

 private:
  SpectralGrid(int dim, int points, double half_length)
      : dim_(dim), points_(points), half_length_(half_length) {}

  int dim_ = 1;
  int points_ = 8;
  double half_length_ = 1.0;
};

SpectralGrid create_grid(int dim, int points, double half_length);

/// Japanese bracket <v> = sqrt(1 + |v|^2), taking |v|^2.
inline double bracket(double r2) noexcept { return std::sqrt(1.0 + r2); }

}  // namespace degen
