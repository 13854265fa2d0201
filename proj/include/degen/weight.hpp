#pragma once

#include "degen/field.hpp"

namespace degen {

enum class WeightDirection { Decay, Growth };

/// lambda(|x|) = <x>^{-sigma} (Decay) or its reciprocal (Growth).
class WeightFunction {
 public:
  WeightFunction(double sigma, WeightDirection direction);

  /// sigma = 0, i.e. lambda == 1. Diagnostic use only.
  static WeightFunction flat();

  double sigma() const noexcept { return sigma_; }
  WeightDirection direction() const noexcept { return direction_; }

  /// lambda(|x|)^{+-1} at squared radius r2.
  double operator()(double r2) const noexcept;
  /// Always the decaying factor <x>^{-sigma}, irrespective of direction.
  double decay(double r2) const noexcept;

 private:
  WeightFunction() = default;
  double sigma_ = 0.0;
  WeightDirection direction_ = WeightDirection::Decay;
};

/// Pointwise multiplication by the weight at physical nodes.
Field weight_apply(const Field& u, const WeightFunction& w);

/// Multiplication by <x>^{power} (any real power) at physical nodes.
Field bracket_power(const Field& u, double power);

}  // namespace degen
