#pragma once

#include <functional>
#include <vector>

#include "degen/field.hpp"
#include "degen/propagator.hpp"
#include "degen/trajectory.hpp"

namespace degen {

enum class BFieldKind { Decaying, ConstantDrift, Zero };

/// b_j(t, x) = t^alpha mu_j <x>^{-sigma} (Decaying), t^alpha mu_j (ConstantDrift)
/// or 0 (Zero).
struct BFieldSpec {
  BFieldKind kind = BFieldKind::Zero;
  std::vector<Complex> mu;
  double sigma = 2.0;
  double alpha = 1.0;

  static BFieldSpec zero(double alpha = 1.0) { return {BFieldKind::Zero, {}, 2.0, alpha}; }
  static BFieldSpec decaying(std::vector<Complex> mu, double sigma, double alpha) {
    return {BFieldKind::Decaying, std::move(mu), sigma, alpha};
  }
  static BFieldSpec drift(std::vector<Complex> c, double alpha) {
    return {BFieldKind::ConstantDrift, std::move(c), 2.0, alpha};
  }

  void validate(int dim) const;
  /// b_j(t, x) at one point.
  Complex value(int j, double t, std::span<const double> x) const;
  /// sup_x max_j |b_j(t, x)|.
  double sup_abs(double t) const;
};

/// Sampled b_j(t, x_i), one physical field per component.
std::vector<Field> eval_b(const BFieldSpec& spec, double t, const SpectralGrid& grid);

/// For |gamma| = 0, 1, 2 returns sup |d^gamma b_j| / (t^alpha <x>^{-sigma-|gamma|})
/// over the given times and the nodes with |x_j| <= interior * L.
/// Derivatives are spectral.
std::vector<double> check_decay(const BFieldSpec& spec, const SpectralGrid& grid,
                                const std::vector<double>& times, double interior = 0.5);

/// Largest admissible step on [0, T]: 0.5 / (sup|b| xi_max).
double stable_step(const BFieldSpec& spec, const SpectralGrid& grid, double T);

/// Right-hand side of the first-order part, i b . grad u + f(t).
Field first_order_rhs(const BFieldSpec& spec, const SourceSampler& f, double t, const Field& u);

/// Right-hand side N(t, u) of u' = i t^alpha Lap u + N(t, u).
using RhsFunction = std::function<Field(double t, const Field& u)>;

/// One Lawson (integrating-factor) RK4 step for u' = i t^alpha Lap u + N(t, u).
Field lawson_rk4_step(const Field& u, double t, double dt, const AlphaParams& p, const RhsFunction& rhs);

/// One integrating-factor RK4 step from t to t + dt.
Field step_linear(const Field& u, double t, double dt, const BFieldSpec& spec, const SourceSampler& f,
                  const AlphaParams& p);

/// nt uniform steps on [0, T]; throws InstabilityError if dt exceeds stable_step.
Trajectory solve_linear(const Field& u0, const BFieldSpec& spec, const SourceSampler& f, double T,
                        int nt, const AlphaParams& p);

/// max over interior snapshots of
/// ||(u(t+dt) - u(t-dt))/(2dt) - i t^alpha Lap u - i b . grad u - f||_0 / ||u||_2.
double residual_check(const Trajectory& traj, const BFieldSpec& spec, const SourceSampler& f,
                      const AlphaParams& p);

}  // namespace degen
