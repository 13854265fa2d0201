#pragma once

#include <functional>
#include <vector>

#include "degen/field.hpp"
#include "degen/trajectory.hpp"

namespace degen {

/// Degeneracy exponent alpha > 0 and the accumulated dispersion
/// Theta(t, s) = (t^{alpha+1} - s^{alpha+1}) / (alpha + 1).
class AlphaParams {
 public:
  explicit AlphaParams(double alpha);

  double alpha() const noexcept { return alpha_; }
  double theta(double t, double s = 0.0) const noexcept;
  /// Dispersion coefficient t^alpha.
  double rate(double t) const noexcept;

 private:
  double alpha_;
};

/// Constant drift c in W = exp(i Theta (Laplacian + c . grad)).
struct DriftVector {
  std::vector<Complex> c;
  /// Unitary exactly when every component is purely imaginary.
  bool unitary() const noexcept;
};

/// Forcing f(t, .) as a callable returning physical fields on one grid.
struct SourceSampler {
  std::function<Field(double)> evaluator;
  /// Number of continuous time derivatives the caller vouches for.
  int time_regularity = 4;

  Field operator()(double t) const;
  bool empty() const noexcept { return !evaluator; }
  static SourceSampler none();
};

/// Multiplies spectral coefficients in place by exp(-i theta |xi|^2).
void apply_dispersion(Field& hat, double theta);

/// W_alpha(t, s) u.
Field w_alpha(const Field& u, double t, double s, const AlphaParams& p);
/// Drift variant, multiplier exp(-i Theta (|xi|^2 - i c . xi)).
Field w_alpha_drift(const Field& u, double t, double s, const AlphaParams& p, const DriftVector& c);
/// The non-degenerate group exp(i t Laplacian), t may be any real.
Field standard_propagator(const Field& u, double t);

/// W(t,0) u0 + int_0^t W(t, tau) f(tau) dtau, composite Simpson on n_quad intervals.
Field duhamel(const Field& u0, const SourceSampler& f, double t, const AlphaParams& p, int n_quad);

/// Snapshots W(t_i, 0) u0, each computed directly from t = 0.
Trajectory homogeneous_trajectory(const Field& u0, const AlphaParams& p,
                                  const std::vector<double>& times);

}  // namespace degen
