#include <cmath>
#include <random>

#include "degen/error.hpp"
#include "degen/propagator.hpp"
#include "degen/quadrature.hpp"
#include "degen/spectral.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace degen;
using testing_support::Complex;

TEST_CASE("quadrature weights integrate polynomials exactly") {
  for (int n : {2, 3, 4, 5, 7, 10}) {
    const double h = 0.3;
    const auto w = simpson_weights(n, h);
    double s0 = 0, s3 = 0;
    for (int i = 0; i <= n; ++i) {
      const double x = i * h;
      s0 += w[i];
      s3 += w[i] * x * x * x;
    }
    const double b = n * h;
    CHECK(s0 == doctest::Approx(b).epsilon(1e-14));
    CHECK(s3 == doctest::Approx(std::pow(b, 4) / 4).epsilon(1e-13));
  }
  const auto w1 = running_integral_weights(1, 0.5);
  double acc = 0;
  for (int i = 0; i < 4; ++i) acc += w1[i] * std::pow(0.5 * i, 3);
  CHECK(acc == doctest::Approx(std::pow(0.5, 4) / 4).epsilon(1e-14));
  const auto tz = trapezoid_weights(4, 0.25);
  CHECK(tz[0] == 0.125);
  CHECK(tz[2] == 0.25);

  const auto rule = graded_gauss_legendre(0.0, 2.0, 6, 3.0);
  double g = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) g += rule.weights[i] * std::sqrt(rule.nodes[i]);
  CHECK(g == doctest::Approx(2.0 / 3.0 * std::pow(2.0, 1.5)).epsilon(1e-6));
}

TEST_CASE("alpha params") {
  const AlphaParams p(1.0);
  CHECK(p.theta(2.0, 0.0) == doctest::Approx(2.0));
  CHECK(p.theta(0.7, 0.7) == 0.0);
  CHECK(p.theta(1.3, 0.2) == doctest::Approx(p.theta(1.3, 0.9) + p.theta(0.9, 0.2)));
  CHECK_THROWS_AS(AlphaParams(0.0), ValidationError);
  CHECK_THROWS_AS(AlphaParams(-1.0), ValidationError);
}

TEST_CASE("w_alpha single mode phase and identity") {
  const auto g = create_grid(1, 32, std::numbers::pi);
  const AlphaParams p(1.0);
  const auto pw = testing_support::plane_wave(g, 1);
  const auto out = w_alpha(pw, 2.0, 0.0, p);
  CHECK(max_abs_diff(out, std::exp(Complex(0.0, -2.0)) * pw) < 1e-13);
  std::mt19937_64 rng(1);
  const auto u = testing_support::random_bandlimited(g, rng);
  CHECK(max_abs_diff(w_alpha(u, 0.8, 0.8, p), u) < 1e-13 * max_abs(u));
  CHECK_THROWS_AS(w_alpha(u, -1.0, 0.0, p), ValidationError);
}

TEST_CASE("w_alpha unitarity, group law and commutation") {
  const auto g = create_grid(1, 128, 8.0);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ud(0.0, 2.0);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const AlphaParams p(alpha);
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = testing_support::random_bandlimited(g, rng);
      const double t = ud(rng), r = ud(rng), s = ud(rng);
      const auto wts = w_alpha(u, t, s, p);
      CHECK(std::abs(l2_norm(wts) - l2_norm(u)) <= 1e-12 * l2_norm(u));
      const auto chained = w_alpha(w_alpha(u, r, s, p), t, r, p);
      CHECK(max_abs_diff(chained, wts) <= 1e-12 * max_abs(u));
      CHECK(max_abs_diff(w_alpha(laplacian(u), t, s, p), laplacian(wts)) <=
            1e-12 * max_abs(laplacian(u)));
    }
  }
}

TEST_CASE("small alpha approaches the standard group") {
  const auto g = create_grid(1, 64, 8.0);
  std::mt19937_64 rng(8);
  const auto u = testing_support::random_bandlimited(g, rng);
  const AlphaParams p(1e-8);
  for (double t : {0.1, 0.5, 1.0})
    CHECK(max_abs_diff(w_alpha(u, t, 0.0, p), standard_propagator(u, t)) < 1e-6 * max_abs(u));
}

TEST_CASE("drift variant") {
  const auto g = create_grid(1, 64, 8.0);
  std::mt19937_64 rng(4);
  const auto u = testing_support::random_bandlimited(g, rng);
  const AlphaParams p(1.0);
  CHECK(max_abs_diff(w_alpha_drift(u, 1.2, 0.3, p, {{Complex(0.0)}}), w_alpha(u, 1.2, 0.3, p)) ==
        0.0);
  const DriftVector imag{{Complex(0.0, 0.7)}};
  CHECK(imag.unitary());
  CHECK(std::abs(l2_norm(w_alpha_drift(u, 1.2, 0.3, p, imag)) - l2_norm(u)) < 1e-12 * l2_norm(u));
  const DriftVector real{{Complex(0.7, 0.0)}};
  CHECK_FALSE(real.unitary());
  CHECK(std::abs(l2_norm(w_alpha_drift(u, 1.2, 0.3, p, real)) - l2_norm(u)) > 1e-3 * l2_norm(u));
}

TEST_CASE("duhamel closed forms") {
  const auto g = create_grid(1, 128, 8.0);
  const AlphaParams p(1.0);
  const auto u0 = testing_support::gaussian(g, 1.0);
  CHECK(max_abs_diff(duhamel(u0, SourceSampler::none(), 0.9, p, 4), w_alpha(u0, 0.9, 0.0, p)) ==
        0.0);

  const auto gsrc = testing_support::gaussian(g, 0.8, 2.0);
  SourceSampler f{[&](double tau) { return w_alpha(gsrc, tau, 0.0, p); }};
  const Field zero(g, Space::Physical);
  for (int n_quad : {2, 5, 16}) {
    const double t = 0.75;
    const auto u = duhamel(zero, f, t, p, n_quad);
    CHECK(max_abs_diff(u, Complex(t) * w_alpha(gsrc, t, 0.0, p)) < 1e-8);
  }
  CHECK_THROWS_AS(duhamel(u0, f, 1.0, p, 1), ValidationError);
}

TEST_CASE("duhamel linearity and residual order") {
  const auto g = create_grid(1, 128, 10.0);
  const AlphaParams p(1.0);
  const auto u0 = testing_support::gaussian(g, 1.0, 1.0);
  const auto gx = testing_support::gaussian(g, 1.5);
  SourceSampler f{[&](double tau) { return Complex(std::sin(2.0 * tau)) * gx; }};
  SourceSampler f2{[&](double tau) { return Complex(2.0 * std::sin(2.0 * tau)) * gx; }};
  const auto a = duhamel(u0, f, 0.6, p, 64);
  const auto b = duhamel(Complex(2.0) * u0, f2, 0.6, p, 64);
  CHECK(max_abs_diff(Complex(2.0) * a, b) < 1e-12);

  auto residual = [&](double h) {
    const double t = 0.8;
    const int nq = 600;
    const auto up = duhamel(u0, f, t + h, p, nq);
    const auto um = duhamel(u0, f, t - h, p, nq);
    const auto uc = duhamel(u0, f, t, p, nq);
    Field r = Complex(1.0 / (2 * h)) * (up - um);
    r -= Complex(0.0, p.rate(t)) * laplacian(uc);
    r -= f(t);
    return l2_norm(r);
  };
  const double r1 = residual(0.02), r2 = residual(0.01);
  const double order = std::log2(r1 / r2);
  CHECK(order > 1.8);
  CHECK(order < 2.2);
}

TEST_CASE("homogeneous trajectory") {
  const auto g = create_grid(1, 64, 8.0);
  const AlphaParams p(2.0);
  std::mt19937_64 rng(5);
  const auto u0 = testing_support::random_bandlimited(g, rng);
  const auto t0 = homogeneous_trajectory(u0, p, {0.0});
  REQUIRE(t0.size() == 1);
  CHECK(max_abs_diff(t0.snapshots[0], u0) == 0.0);
  const auto traj = homogeneous_trajectory(u0, p, {0.0, 0.25, 0.5, 1.0});
  for (std::size_t i = 0; i < traj.size(); ++i)
    CHECK(std::abs(l2_norm(traj.snapshots[i]) - l2_norm(u0)) < 1e-12 * l2_norm(u0));
  const auto via = w_alpha(w_alpha(u0, 0.5, 0.0, p), 1.0, 0.5, p);
  CHECK(max_abs_diff(traj.snapshots[3], via) < 1e-12 * max_abs(u0));
  CHECK_THROWS_AS(homogeneous_trajectory(u0, p, {0.5, 0.2}), ValidationError);
}
