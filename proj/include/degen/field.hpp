#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "degen/grid.hpp"

namespace degen {

using Complex = std::complex<double>;

enum class Space : std::uint8_t { Physical = 0, Spectral = 1 };

/// Complex samples of a function on a SpectralGrid, tagged with the space
/// they live in. Spectral values carry the quadrature factor (2L/N)^n so that
/// they approximate the continuous Fourier transform
///   u^(xi) = int e^{-i x.xi} u(x) dx.
class Field {
 public:
  Field(const SpectralGrid& grid, Space space);
  Field(const SpectralGrid& grid, std::vector<Complex> values, Space space);

  /// Samples f at every node (physical space).
  static Field sample(const SpectralGrid& grid,
                      const std::function<Complex(double x, double y)>& f);

  const SpectralGrid& grid() const noexcept { return grid_; }
  Space space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const Complex> values() const noexcept { return values_; }
  std::span<Complex> mutable_values() noexcept { return values_; }
  const Complex& operator[](std::size_t i) const noexcept { return values_[i]; }
  Complex& operator[](std::size_t i) noexcept { return values_[i]; }

  bool is_physical() const noexcept { return space_ == Space::Physical; }
  bool is_spectral() const noexcept { return space_ == Space::Spectral; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex scale);

 private:
  SpectralGrid grid_;
  std::vector<Complex> values_;
  Space space_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex s, Field a);

/// a += s * b, same grid and space.
void axpy(Complex s, const Field& b, Field& a);

/// Forward transform; rejects input already tagged spectral.
Field to_spectral(const Field& u);
/// Inverse transform; rejects input already tagged physical.
Field to_physical(const Field& u);
/// Tag-agnostic conversions (no-op when already in the requested space).
Field as_spectral(const Field& u);
Field as_physical(const Field& u);

/// Dense O(N^{2n}) evaluation of the forward transform, used as an oracle.
Field dense_dft(const Field& u);

/// L2 norm computed in whichever space u is tagged with.
double l2_norm(const Field& u);
/// L2 inner product <u, v> = int u conj(v) dx.
Complex inner(const Field& u, const Field& v);
/// max |u_i| over samples in the current space.
double max_abs(const Field& u);
/// max |u - v| after bringing v into u's space.
double max_abs_diff(const Field& u, const Field& v);
/// Largest modulus on the outermost ring of nodes divided by the global max.
double boundary_ratio(const Field& u);

void require_same_grid(const Field& a, const Field& b, const char* where);

// DSF1 snapshot format.
void write_dsf1(std::ostream& os, const Field& u);
Field read_dsf1(std::istream& is);
void save_dsf1(const std::string& path, const Field& u);
Field load_dsf1(const std::string& path);

}  // namespace degen
