#include <cmath>
#include <map>

#include "degen/ensemble.hpp"
#include "degen/error.hpp"
#include "degen/nonlinear.hpp"
#include "degen/norms.hpp"
#include "degen/spectral.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace degen;
using testing_support::Complex;

namespace {

NonlinearitySpec power(int k = 1, int sign = 1) { return {NonlinearityKind::Power, k, sign, 1.0}; }

NonlinearitySpec derivative(double beta, int k = 1, int sign = 1) {
  return {NonlinearityKind::Derivative, k, sign, beta};
}

// Source -i F(u(t_n)) looked up from the snapshots, for the residual check.
SourceSampler snapshot_source(const Trajectory& traj, const NonlinearitySpec& spec) {
  auto table = std::make_shared<std::map<double, Field>>();
  for (std::size_t n = 0; n < traj.size(); ++n)
    table->emplace(traj.times[n],
                   Complex(0.0, -1.0) * eval_nonlinearity(spec, traj.times[n], as_physical(traj.snapshots[n])));
  return {[table](double t) { return table->at(t); }};
}

double least_squares_r2(const std::vector<double>& x, const std::vector<double>& y, double* slope) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - b * sx) / n;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_res += std::pow(y[i] - a - b * x[i], 2);
    ss_tot += std::pow(y[i] - sy / n, 2);
  }
  *slope = b;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace

TEST_CASE("nonlinearity evaluation") {
  const auto g = create_grid(1, 64, 8.0);
  SUBCASE("zero in, zero out") {
    const Field z(g, Space::Physical);
    CHECK(max_abs(eval_nonlinearity(power(), 0.3, z)) == 0.0);
    CHECK(max_abs(eval_nonlinearity(derivative(2.0), 0.3, z)) == 0.0);
  }
  SUBCASE("constant data gives c|c|^2") {
    const Complex c(0.6, -0.3);
    const Field u = Field::sample(g, [c](double, double) { return c; });
    const Field out = eval_nonlinearity(power(), 0.0, u);
    const Complex expect = c * std::norm(c);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - expect) < 1e-14);
    const Field focus = eval_nonlinearity(power(2, -1), 0.0, u);
    CHECK(std::abs(focus[5] + c * std::norm(c) * std::norm(c)) < 1e-14);
  }
  SUBCASE("plane-wave derivative algebra") {
    const int k = 3;
    const double t = 0.7, beta = 1.5;
    const Field u = testing_support::plane_wave(g, k);
    const Field out = eval_nonlinearity(derivative(beta), t, u);
    const Field cube = testing_support::plane_wave(g, 3 * k);
    const Complex amp = std::pow(t, beta) * Complex(0.0, g.dxi() * k);
    CHECK(max_abs_diff(out, amp * cube) < 1e-12);
  }
  SUBCASE("products above the two-thirds band are removed") {
    const Field u = testing_support::plane_wave(g, 10);
    // u|u|^2 = u stays; u^3 d_x u lands on mode 40, aliased to -24, and is dropped.
    CHECK(max_abs_diff(eval_nonlinearity(power(), 0.0, u), u) < 1e-12);
    CHECK(max_abs(eval_nonlinearity(derivative(1.0), 1.0, u)) < 1e-12);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(eval_nonlinearity(power(0), 0.0, Field(g, Space::Physical)), ValidationError);
    CHECK_THROWS_AS(derivative(0.5).validate(1.0), ValidationError);
    CHECK_NOTHROW(derivative(1.0).validate(1.0));
    CHECK_FALSE(derivative(1.0).picard_supported(1.0));
    CHECK(derivative(1.5).picard_supported(1.0));
  }
}

TEST_CASE("distance in the fixed-point space") {
  const auto g = create_grid(1, 128, 16.0);
  const AlphaParams p(1.0);
  const Field u0 = testing_support::gaussian(g, 1.0, 1.0);
  std::vector<double> times;
  for (int n = 0; n <= 16; ++n) times.push_back(0.5 * n / 16);
  const Trajectory a = homogeneous_trajectory(u0, p, times);
  const Trajectory b = homogeneous_trajectory(Complex(0.5) * u0, p, times);
  CHECK(x_distance(a, a, 1.0, 0.0) == 0.0);
  CHECK(x_distance(a, b, 1.0, 0.0) == doctest::Approx(0.5 * x_norm(a, 1.0, 0.0)).epsilon(1e-12));
  CHECK(x_distance(a, b, 1.0, 0.0) == doctest::Approx(x_distance(b, a, 1.0, 0.0)).epsilon(1e-14));
  // Mass part alone is sup_t ||u||, conserved by the free flow.
  CHECK(x_norm(a, 1.0, 0.0) > 2.0 * l2_norm(u0) - 1e-12);
}

TEST_CASE("Picard iteration") {
  const auto g = create_grid(1, 128, 16.0);
  const AlphaParams p(1.0);
  PicardOptions opt;
  opt.nt = 32;
  opt.tol = 1e-12;

  SUBCASE("zero data converges in one iteration") {
    const auto st = picard_solve(Field(g, Space::Physical), power(), p, 0.5, opt);
    CHECK(st.converged);
    CHECK(st.iterations == 1);
    CHECK(max_abs(st.trajectory.back()) == 0.0);
  }
  SUBCASE("tiny data: few iterations, quadratic smallness") {
    const Field shape = testing_support::gaussian(g, 1.0);
    const Field u0 = Complex(1e-6 / l2_norm(shape)) * shape;
    const auto st = picard_solve(u0, power(), p, 0.5, opt);
    CHECK(st.converged);
    CHECK(st.iterations <= 3);
    const auto st2 = picard_solve(Complex(2.0) * u0, power(), p, 0.5, opt);
    const double q1 = st.distances[0] / st.norms[0];
    const double q2 = st2.distances[0] / st2.norms[0];
    // d_0 is a difference of O(1e-6) fields that agree to O(1e-18), so it
    // carries ~1e-4 relative rounding.
    CHECK(q2 / q1 == doctest::Approx(4.0).epsilon(1e-3));
  }
  SUBCASE("fixed point satisfies the integral equation") {
    const Field shape = testing_support::gaussian(g, 1.0, 0.5);
    const Field u0 = Complex(0.5 / l2_norm(shape)) * shape;
    const auto st = picard_solve(u0, power(), p, 0.5, opt);
    REQUIRE(st.converged);
    CHECK(st.iterations <= 8);
    const Trajectory again = picard_map(u0, st.trajectory, power(), p);
    const double d = x_distance(again, st.trajectory, 1.0, 0.0);
    CHECK(d <= opt.tol * x_norm(st.trajectory, 1.0, 0.0) * 1.5);
  }
  SUBCASE("PDE residual is second order") {
    const Field shape = testing_support::gaussian(g, 1.0, 0.5);
    const Field u0 = Complex(0.5 / l2_norm(shape)) * shape;
    std::vector<double> res;
    for (int nt : {32, 64}) {
      opt.nt = nt;
      const auto st = picard_solve(u0, power(), p, 0.5, opt);
      res.push_back(residual_check(st.trajectory, BFieldSpec::zero(1.0),
                                   snapshot_source(st.trajectory, power()), p));
    }
    const double order = std::log2(res[0] / res[1]);
    CHECK(order > 1.8);
    CHECK(order < 2.2);
  }
  SUBCASE("supercritical time fails with a distance history") {
    const Field shape = testing_support::gaussian(g, 0.5);
    const Field u0 = Complex(4.0 / l2_norm(shape)) * shape;
    opt.max_iter = 6;
    opt.nt = 64;
    CHECK_THROWS_AS(picard_solve(u0, power(), p, 4.0, opt), ConvergenceError);
    opt.throw_on_failure = false;
    const auto st = picard_solve(u0, power(), p, 4.0, opt);
    CHECK_FALSE(st.converged);
    CHECK(st.distances.size() == 6);
  }
  SUBCASE("beta = alpha is refused") {
    CHECK_THROWS_AS(picard_solve(testing_support::gaussian(g, 1.0), derivative(1.0), p, 0.5, opt),
                    ValidationError);
  }
}

TEST_CASE("time stepping") {
  const auto g = create_grid(1, 128, 16.0);
  const AlphaParams p(1.0);
  const Field shape = testing_support::gaussian(g, 1.0, 0.5);
  const Field u0 = Complex(0.5 / l2_norm(shape)) * shape;

  SUBCASE("zero data stays zero") {
    const auto tr = step_nonlinear(Field(g, Space::Physical), power(), BFieldSpec::zero(1.0), p, 1.0, 10);
    CHECK(max_abs(tr.back()) == 0.0);
  }
  SUBCASE("defocusing mass conservation") {
    const auto tr = step_nonlinear(u0, power(1, 1), BFieldSpec::zero(1.0), p, 1.0, 200);
    double drift = 0.0;
    for (const auto& f : tr.snapshots) drift = std::max(drift, std::abs(l2_norm(f) - l2_norm(u0)));
    CHECK(drift <= 1e-8);
  }
  SUBCASE("agrees with Picard at the final time") {
    PicardOptions opt;
    opt.nt = 64;
    opt.tol = 1e-12;
    const auto st = picard_solve(u0, power(), p, 0.5, opt);
    const auto tr = step_nonlinear(u0, power(), BFieldSpec::zero(1.0), p, 0.5, 64);
    CHECK(l2_norm(tr.back() - st.trajectory.back()) <= 1e-5);
  }
  SUBCASE("beta = alpha derivative kind runs") {
    const auto tr = step_nonlinear(u0, derivative(1.0), BFieldSpec::zero(1.0), p, 0.5, 200);
    CHECK(tr.size() == 201);
    CHECK(std::isfinite(l2_norm(tr.back())));
  }
  SUBCASE("nonlinear step bound") {
    const Field big = Complex(20.0) * u0;
    CHECK_THROWS_AS(step_nonlinear(big, power(), BFieldSpec::zero(1.0), p, 1.0, 10), InstabilityError);
  }
}

TEST_CASE("contraction probe") {
  const auto g = create_grid(1, 256, 16.0);
  const AlphaParams p(1.0);
  const Field zero(g, Space::Physical);
  ContractionOptions opt;
  opt.seed = 7;

  SUBCASE("linear in T") {
    std::vector<double> ts{0.02, 0.04, 0.08}, th;
    for (double T : ts) th.push_back(contraction_probe(zero, power(), p, T, 0.5, 4, opt).mean);
    double slope = 0.0;
    const double r2 = least_squares_r2(ts, th, &slope);
    CHECK(r2 >= 0.95);
    CHECK(slope > 0.0);
    CHECK(th[2] / th[0] == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("radius doubling quadruples the factor for k = 1") {
    const double a = contraction_probe(zero, power(), p, 0.05, 0.5, 4, opt).mean;
    const double b = contraction_probe(zero, power(), p, 0.05, 1.0, 4, opt).mean;
    CHECK(b / a == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("ensembles and space-time norms") {
  const auto g = create_grid(1, 256, 16.0);
  EnsembleSpec spec;
  spec.count = 5;
  spec.seed = 11;
  for (auto fam : {EnsembleFamily::Gaussian, EnsembleFamily::ModulatedGaussian, EnsembleFamily::RandomBandlimited}) {
    spec.family = fam;
    spec.frequencies = {1.0, 3.0};
    const auto a = make_ensemble(spec, g);
    const auto b = make_ensemble(spec, g);
    REQUIRE(a.size() == 5);
    for (std::size_t m = 0; m < a.size(); ++m) {
      CHECK(l2_norm(a[m]) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(max_abs_diff(a[m], b[m]) == 0.0);
    }
    CHECK(parse_family(family_name(fam)) == fam);
  }
  spec.family = EnsembleFamily::Gaussian;
  spec.width = 8.0;
  CHECK_THROWS_AS(make_ensemble(spec, g), ValidationError);
  spec.width = 0.05;
  CHECK_THROWS_AS(make_ensemble(spec, g), ValidationError);

  const auto g2 = create_grid(2, 16, 2.0);
  std::vector<double> ones(g2.size(), 1.0);
  const auto cubes = cube_integrals(g2, ones, 1.0);
  REQUIRE(cubes.size() == 16);
  for (double c : cubes) CHECK(c == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sup_space_time(g2, ones) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(cube_integrals(g2, ones, 0.3), ValidationError);
}
