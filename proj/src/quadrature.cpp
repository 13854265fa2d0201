#include "degen/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "degen/error.hpp"

namespace degen {

std::vector<double> trapezoid_weights(int n, double h) {
  require(n >= 1, "trapezoid rule needs at least one interval");
  std::vector<double> w(n + 1, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

std::vector<double> simpson_weights(int n, double h) {
  require(n >= 2, "Simpson rule needs at least two intervals");
  std::vector<double> w(n + 1, 0.0);
  const int even = (n % 2 == 0) ? n : n - 3;
  for (int i = 0; i < even; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (even != n) {
    const double c = 3.0 * h / 8.0;
    w[even] += c;
    w[even + 1] += 3.0 * c;
    w[even + 2] += 3.0 * c;
    w[even + 3] += c;
  }
  return w;
}

std::vector<double> running_integral_weights(int m, double h) {
  require(m >= 1, "running integral needs m >= 1");
  if (m == 1) return {9.0 * h / 24.0, 19.0 * h / 24.0, -5.0 * h / 24.0, h / 24.0};
  return simpson_weights(m, h);
}

QuadratureRule graded_gauss_legendre(double a, double b, int panels, double grading) {
  require(panels >= 1 && grading >= 1.0 && b > a, "invalid graded quadrature request");
  using GL = boost::math::quadrature::gauss<double, 20>;
  std::vector<double> edges(panels + 1);
  double total = 0.0;
  for (int i = 0; i < panels; ++i) total += std::pow(grading, i);
  edges[0] = a;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    acc += std::pow(grading, i);
    edges[i + 1] = a + (b - a) * acc / total;
  }
  edges[panels] = b;

  // Boost stores the non-negative half of the symmetric rule.
  const auto& xs = GL::abscissa();
  const auto& ws = GL::weights();
  QuadratureRule rule;
  for (int p = 0; p < panels; ++p) {
    const double mid = 0.5 * (edges[p] + edges[p + 1]);
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == 0.0) {
        rule.nodes.push_back(mid);
        rule.weights.push_back(half * ws[i]);
        continue;
      }
      rule.nodes.push_back(mid - half * xs[i]);
      rule.weights.push_back(half * ws[i]);
      rule.nodes.push_back(mid + half * xs[i]);
      rule.weights.push_back(half * ws[i]);
    }
  }
  return rule;
}

}  // namespace degen
