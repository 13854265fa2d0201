#pragma once

#include <functional>
#include <span>
#include <vector>

#include "degen/field.hpp"

namespace degen {

/// A Fourier multiplier m(xi). The evaluator receives the frequency vector
/// (one component per dimension).
struct MultiplierSymbol {
  std::function<Complex(std::span<const double> xi)> evaluator;
  double order = 0.0;
};

/// Samples m on the lattice in spectral slot order. Throws on non-finite values.
std::vector<Complex> sample_multiplier(const SpectralGrid& grid, const MultiplierSymbol& m);

Field apply_multiplier(const Field& u, const MultiplierSymbol& m);
/// Table-driven variant; `table` is in spectral slot order.
Field apply_multiplier(const Field& u, std::span<const Complex> table);

/// D^gamma: multiplier |xi|^gamma, gamma >= 0 (zero mode annihilated for gamma > 0).
Field fractional_derivative(const Field& u, double gamma);
/// Lambda^s: multiplier <xi>^s.
Field bessel_potential(const Field& u, double s);
/// d/dx_axis, multiplier i xi_axis.
Field partial_derivative(const Field& u, int axis);
/// Sum over axes of d/dx_j.
Field divergence_derivative(const Field& u);
/// Laplacian, multiplier -|xi|^2.
Field laplacian(const Field& u);

/// ||u||_s = ||<xi>^s u^||, computed in spectral space.
double sobolev_norm(const Field& u, double s);
/// ||D^s u||, homogeneous seminorm.
double homogeneous_sobolev_norm(const Field& u, double s);

/// Zeros every slot with |k_j| >= cutoff for some axis j.
Field truncate_modes(const Field& u, int cutoff);
/// Keeps |k_j| < N/4 on every axis (band-limit discipline).
Field band_limit(const Field& u);
/// Two-thirds rule: keeps |k_j| <= N/3.
Field dealias(const Field& u);
/// Relative l2 mass carried by slots with |k_j| >= N/4 on some axis.
double high_mode_fraction(const Field& u);

}  // namespace degen
