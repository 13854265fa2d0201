#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degen/evolution.hpp"
#include "degen/field.hpp"
#include "degen/propagator.hpp"
#include "degen/trajectory.hpp"

namespace degen {

enum class NonlinearityKind { Power, Derivative };

/// F(u) = sign u|u|^{2k} (Power) or sign t^beta (sum_j d_j u) u^{2k} (Derivative).
/// The equation is i u_t + t^alpha Lap u + b . grad u = F(u); sign = +1 is defocusing.
struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::Power;
  int k = 1;
  int sign = 1;
  double beta = 1.0;

  /// Derivative kind needs beta >= alpha.
  void validate(double alpha) const;
  /// Picard is offered for Power and for Derivative with beta > alpha.
  bool picard_supported(double alpha) const;
};

NonlinearityKind parse_nonlinearity_kind(const std::string& name);

/// F(u) at time t, 2/3-rule dealiased. Returns a physical field.
Field eval_nonlinearity(const NonlinearitySpec& spec, double t, const Field& u);

/// Distance in the fixed-point space: sup_x (int_0^T t^alpha |D^{1/2+s} w|^2 dt)^{1/2}
/// + sup_t ||w||_{H^s-dot} + sup_t ||w||_{L2}, w = a - b. In 2D the first term
/// takes the sup over unit cubes. Time integral by trapezoid on the stored samples.
double x_distance(const Trajectory& a, const Trajectory& b, double alpha, double s);
double x_norm(const Trajectory& a, double alpha, double s);

/// Phi(u)(t_j) = W(t_j,0) u0 - i int_0^{t_j} W(t_j,tau) F(u(tau)) dtau, reusing the
/// samples of `u` (uniform times, at least 3 steps) with running Simpson weights.
Trajectory picard_map(const Field& u0, const Trajectory& u, const NonlinearitySpec& spec,
                      const AlphaParams& p);

struct PicardOptions {
  int nt = 64;
  int max_iter = 30;
  double tol = 1e-10;
  /// Sobolev index of the distance.
  double s = 0.0;
  bool throw_on_failure = true;
};

struct PicardState {
  int iterations = 0;
  bool converged = false;
  Trajectory trajectory;
  /// d_X(u^{(m+1)}, u^{(m)}) for m = 0, 1, ...
  std::vector<double> distances;
  /// ||u^{(m+1)}||_X matching `distances`.
  std::vector<double> norms;
};

/// Iterates Phi from u^{(0)}(t) = W(t,0) u0 until d_m <= tol ||u^{(m+1)}||_X or d_m = 0.
/// Throws ConvergenceError after max_iter unless throw_on_failure is false.
PicardState picard_solve(const Field& u0, const NonlinearitySpec& spec, const AlphaParams& p, double T,
                         const PicardOptions& options);

/// Largest admissible step for the nonlinear term at amplitude `amplitude`:
/// 0.5 / ((2k+1) A^{2k} (1 + T^beta xi_max)) for the derivative kind, without
/// the bracket for the power kind.
double nonlinear_stable_step(const NonlinearitySpec& spec, const SpectralGrid& grid, double amplitude,
                             double T);

/// Integrating-factor RK4 for u_t = i t^alpha Lap u + i b . grad u - i F(u) on nt steps.
/// Stops early when ||u||_inf > 1e6 or a value is not finite; metadata then holds
/// blow_up = true and last_good_time.
Trajectory step_nonlinear(const Field& u0, const NonlinearitySpec& spec, const BFieldSpec& bspec,
                          const AlphaParams& p, double T, int nt);

struct ContractionStats {
  double max = 0.0;
  double mean = 0.0;
  int samples = 0;
  std::vector<double> ratios;
};

struct ContractionOptions {
  int nt = 32;
  double s = 0.0;
  std::uint64_t seed = 1;
  /// Width of the random packets defining the pair members.
  double width = 1.0;
};

/// d_X(Phi u, Phi v) / d_X(u, v) over n_pairs random pairs in the X-ball of radius
/// R around W(t,0) u0. Members are W(t,0)(u0 + c psi) with psi a random packet and
/// c chosen so the X-distance to the centre is R r, r uniform in (0, 1].
/// Pairs with u = v are skipped.
ContractionStats contraction_probe(const Field& u0, const NonlinearitySpec& spec, const AlphaParams& p,
                                   double T, double radius, int n_pairs,
                                   const ContractionOptions& options = {});

}  // namespace degen
