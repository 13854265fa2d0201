#pragma once

#include <vector>

namespace degen {

/// Weights of the composite trapezoid rule on n intervals of width h (n+1 nodes).
std::vector<double> trapezoid_weights(int n, double h);

/// Composite Simpson weights on n >= 2 intervals of width h. For odd n the
/// last three intervals use the 3/8 rule so the order stays four.
std::vector<double> simpson_weights(int n, double h);

/// Weights for integrating over [0, m*h] using the samples at 0..m (m >= 1).
/// m = 1 borrows nodes 2 and 3 (must exist) for a fourth-order formula.
/// Returned vector has max(m + 1, 4) entries.
std::vector<double> running_integral_weights(int m, double h);

/// Nodes and weights of composite Gauss-Legendre on [a, b]. Panels are
/// geometrically graded towards `a` by `grading` (1 = uniform).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule graded_gauss_legendre(double a, double b, int panels, double grading);

}  // namespace degen
