#pragma once

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "degen/field.hpp"
#include "degen/spectral.hpp"
#include "degen/weight.hpp"

namespace degen {

/// a(x_i, xi_k) sampled on nodes x frequency slots; entry (i, k) lives at
/// i * size + k. Optional derivative tables (one per axis) carry exact
/// derivatives when the symbol is known in closed form; otherwise derivatives
/// are computed numerically.
struct GridSymbol {
  SpectralGrid grid;
  std::vector<Complex> values;
  double order = 0.0;
  bool real_valued = false;
  std::vector<std::vector<Complex>> dx;    // d/dx_j
  std::vector<std::vector<Complex>> dxi;   // d/dxi_j
  std::vector<std::vector<Complex>> dxi2;  // d^2/dxi_j^2

  std::size_t side() const noexcept { return grid.size(); }
  const Complex& at(std::size_t i, std::size_t k) const noexcept { return values[i * side() + k]; }
  bool has_dx() const noexcept { return !dx.empty(); }
  bool has_dxi() const noexcept { return !dxi.empty(); }
  bool has_dxi2() const noexcept { return !dxi2.empty(); }
  /// Throws if any sample is non-finite or a real symbol has |Im| > 1e-14.
  void validate() const;
};

/// Callback signature for closed-form symbols: x and xi hold `dim` components.
using SymbolFunction = std::function<Complex(std::span<const double> x, std::span<const double> xi)>;
/// Derivative callbacks additionally receive the axis j.
using SymbolDerivative =
    std::function<Complex(std::span<const double> x, std::span<const double> xi, int j)>;

struct SymbolDefinition {
  SymbolFunction value;
  SymbolDerivative dx;
  SymbolDerivative dxi;
  SymbolDerivative dxi2;
  double order = 0.0;
  bool real_valued = false;
};

GridSymbol tabulate_symbol(const SpectralGrid& grid, const SymbolDefinition& def);

// Factories.
GridSymbol constant_symbol(const SpectralGrid& grid, Complex c);
GridSymbol multiplier_as_symbol(const SpectralGrid& grid, const MultiplierSymbol& m);
/// g(x), xi-independent. x-derivatives are taken numerically.
GridSymbol potential_symbol(const SpectralGrid& grid,
                            const std::function<Complex(std::span<const double>)>& g);
/// xi_j.
GridSymbol frequency_symbol(const SpectralGrid& grid, int axis);
/// |xi|^2.
GridSymbol xi_squared_symbol(const SpectralGrid& grid);
/// q = x.xi / <xi>.
GridSymbol escape_direction_symbol(const SpectralGrid& grid);
/// Pointwise product, derivative tables by the product rule when both carry them.
GridSymbol symbol_product(const GridSymbol& a, const GridSymbol& b);

enum class DerivativeMode { Auto, Numerical };

/// d/dx_j: analytic table if present (Auto), else spectral differentiation in x.
std::vector<Complex> symbol_dx(const GridSymbol& a, int axis, DerivativeMode mode = DerivativeMode::Auto);
/// d/dxi_j: analytic table if present (Auto), else fourth-order differences.
std::vector<Complex> symbol_dxi(const GridSymbol& a, int axis, DerivativeMode mode = DerivativeMode::Auto);
std::vector<Complex> symbol_dxi2(const GridSymbol& a, int axis, DerivativeMode mode = DerivativeMode::Auto);

/// Fourth-order finite differences along one axis of a line of samples with
/// spacing h (one-sided near the ends). Exposed for testing.
std::vector<double> fd_first(std::span<const double> f, double h);
std::vector<double> fd_second(std::span<const double> f, double h);

/// Kohn-Nirenberg quantization, dense evaluation:
/// (Op(a)u)(x_i) = (1/2L)^n sum_k e^{i x_i.xi_k} a(x_i, xi_k) u^(xi_k).
/// Returns a physical field.
Field op_apply(const GridSymbol& a, const Field& u);

/// {a, b} = grad_xi a . grad_x b - grad_x a . grad_xi b.
GridSymbol poisson_bracket(const GridSymbol& a, const GridSymbol& b,
                           DerivativeMode mode = DerivativeMode::Auto);
/// Principal symbol of [Op(p1), Op(p2)]: -i {p1, p2}.
GridSymbol commutator_leading(const GridSymbol& p1, const GridSymbol& p2,
                              DerivativeMode mode = DerivativeMode::Auto);

struct DoiParams {
  double sigma = 2.0;
  double cprime = 1.0;
  double sobolev_s = 0.0;
  /// Scale on the escape function. The default makes the positive commutator
  /// bound hold exactly for |xi| >= 1; gain = 1 is the bare profile.
  double gain = std::numbers::sqrt2;

  void validate() const;
};

/// Phi(theta) = int_0^theta <r>^{-sigma} dr and its first two derivatives.
double doi_profile(double theta, double sigma);
double doi_profile_d1(double theta, double sigma);
double doi_profile_d2(double theta, double sigma);
/// int_R <r>^{-sigma} dr.
double doi_profile_total(double sigma);
/// sup |p| = (C'/2) gain Phi(inf).
double doi_phase_bound(const DoiParams& d);

/// p(x, xi) = (C'/2) gain Phi(x.xi / <xi>) with exact derivative tables.
GridSymbol doi_phase(const DoiParams& d, const SpectralGrid& grid);

struct GardingOptions {
  /// Replaces lambda(|x|) = <x>^{-sigma}; receives |x|^2.
  std::function<double(double)> weight;
  /// Restrict to |xi| >= 1 and x.xi >= 0.
  bool restrict_region = false;
  DerivativeMode mode = DerivativeMode::Auto;
};

/// max over the lattice of (C' lambda(|x|) |xi| - 2 xi . grad_x p)_+.
double garding_defect(const GridSymbol& p, const DoiParams& d, const GardingOptions& opts = {});

/// K = e^p <xi>^s with derivative tables inherited from p.
GridSymbol build_K(const DoiParams& d, const SpectralGrid& grid);
GridSymbol build_K_from_phase(const GridSymbol& p, double s);

/// N(u) = sqrt(||Op(K)u||_0^2 + ||u||_{s-1}^2).
double n_norm(const Field& u, const GridSymbol& K, double s);
double n_norm(const Field& u, const DoiParams& d);

/// L2 norm of (1+|x|^2)Op(p)u - Op(p)[(1+|x|^2)u] - 2 sum_j Op(i d_xi_j p)[x_j u]
///   + sum_j Op(d_xi_j^2 p) u.
double weight_commutation_identity(const GridSymbol& p, const Field& u,
                                   DerivativeMode mode = DerivativeMode::Auto);

}  // namespace degen
