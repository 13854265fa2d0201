#include "degen/weight.hpp"

#include <cmath>

#include "degen/error.hpp"

namespace degen {

WeightFunction::WeightFunction(double sigma, WeightDirection direction)
    : sigma_(sigma), direction_(direction) {
  require(sigma > 1.0, "weight exponent sigma must exceed 1");
}

WeightFunction WeightFunction::flat() { return WeightFunction(); }

double WeightFunction::decay(double r2) const noexcept { return std::pow(1.0 + r2, -0.5 * sigma_); }

double WeightFunction::operator()(double r2) const noexcept {
  const double d = decay(r2);
  return direction_ == WeightDirection::Decay ? d : 1.0 / d;
}

Field weight_apply(const Field& u, const WeightFunction& w) {
  require(u.is_physical(), "weight_apply: field must be in physical space");
  Field out = u;
  const auto& g = out.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = g.position(i);
    out[i] *= w(x[0] * x[0] + x[1] * x[1]);
  }
  return out;
}

Field bracket_power(const Field& u, double power) {
  Field out = as_physical(u);
  const auto& g = out.grid();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = g.position(i);
    out[i] *= std::pow(1.0 + x[0] * x[0] + x[1] * x[1], 0.5 * power);
  }
  return out;
}

}  // namespace degen
