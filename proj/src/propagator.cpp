#include "degen/propagator.hpp"

#include <cmath>

#include "degen/error.hpp"
#include "degen/parallel.hpp"
#include "degen/quadrature.hpp"

namespace degen {

AlphaParams::AlphaParams(double alpha) : alpha_(alpha) {
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be positive");
}

double AlphaParams::theta(double t, double s) const noexcept {
  const double a1 = alpha_ + 1.0;
  return (std::pow(t, a1) - std::pow(s, a1)) / a1;
}

double AlphaParams::rate(double t) const noexcept { return std::pow(t, alpha_); }

bool DriftVector::unitary() const noexcept {
  for (const auto& v : c)
    if (v.real() != 0.0) return false;
  return true;
}

Field SourceSampler::operator()(double t) const {
  require(static_cast<bool>(evaluator), "source sampler is empty");
  return evaluator(t);
}

SourceSampler SourceSampler::none() { return {}; }

namespace {

void require_times(double t, double s) {
  require(t >= 0.0 && s >= 0.0, "propagator times must be non-negative");
}

double xi_squared(const SpectralGrid& g, std::size_t i) {
  const auto xi = g.wavevector(i);
  return xi[0] * xi[0] + xi[1] * xi[1];
}

}  // namespace

void apply_dispersion(Field& hat, double theta) {
  require(hat.is_spectral(), "apply_dispersion expects spectral data");
  if (theta == 0.0) return;
  const auto& g = hat.grid();
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double ph = -theta * xi_squared(g, i);
    hat[i] *= Complex(std::cos(ph), std::sin(ph));
  }
}

Field w_alpha(const Field& u, double t, double s, const AlphaParams& p) {
  require_times(t, s);
  Field hat = as_spectral(u);
  apply_dispersion(hat, p.theta(t, s));
  return u.is_physical() ? to_physical(hat) : hat;
}

Field w_alpha_drift(const Field& u, double t, double s, const AlphaParams& p, const DriftVector& c) {
  require_times(t, s);
  const auto& g = u.grid();
  require(static_cast<int>(c.c.size()) == g.dim(), "drift vector length must equal grid dimension");
  const double th = p.theta(t, s);
  Field hat = as_spectral(u);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto xi = g.wavevector(i);
    Complex cxi = 0.0;
    for (int j = 0; j < g.dim(); ++j) cxi += c.c[j] * xi[j];
    hat[i] *= std::exp(Complex(0.0, -th) * (xi_squared(g, i) - Complex(0.0, 1.0) * cxi));
  }
  return u.is_physical() ? to_physical(hat) : hat;
}

Field standard_propagator(const Field& u, double t) {
  Field hat = as_spectral(u);
  apply_dispersion(hat, t);
  return u.is_physical() ? to_physical(hat) : hat;
}

Field duhamel(const Field& u0, const SourceSampler& f, double t, const AlphaParams& p, int n_quad) {
  require(n_quad >= 2, "duhamel needs n_quad >= 2");
  require(t >= 0.0, "duhamel time must be non-negative");
  Field acc = as_spectral(u0);
  apply_dispersion(acc, p.theta(t, 0.0));
  if (f.empty() || t == 0.0) return u0.is_physical() ? to_physical(acc) : acc;

  const double h = t / n_quad;
  const auto w = simpson_weights(n_quad, h);
  std::vector<Field> terms(n_quad + 1, Field(u0.grid(), Space::Spectral));
  parallel_for(terms.size(), [&](std::size_t j) {
    const double tau = j == static_cast<std::size_t>(n_quad) ? t : h * static_cast<double>(j);
    const Field fj = f(tau);
    require_same_grid(u0, fj, "duhamel source");
    Field hat = as_spectral(fj);
    apply_dispersion(hat, p.theta(t, tau));
    terms[j] = std::move(hat);
  });
  for (std::size_t j = 0; j < terms.size(); ++j) axpy(w[j], terms[j], acc);
  return u0.is_physical() ? to_physical(acc) : acc;
}

Trajectory homogeneous_trajectory(const Field& u0, const AlphaParams& p,
                                  const std::vector<double>& times) {
  require(!times.empty(), "homogeneous_trajectory needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0, "times must be non-negative");
    if (i > 0) require(times[i] > times[i - 1], "times must be sorted and distinct");
  }
  Trajectory traj;
  traj.scheme = "exact-multiplier";
  const Field hat0 = as_spectral(u0);
  std::vector<Field> snaps(times.size(), Field(u0.grid(), Space::Physical));
  parallel_for(times.size(), [&](std::size_t i) {
    if (times[i] == 0.0) {
      snaps[i] = u0;
      return;
    }
    Field hat = hat0;
    apply_dispersion(hat, p.theta(times[i], 0.0));
    snaps[i] = u0.is_physical() ? to_physical(hat) : hat;
  });
  for (std::size_t i = 0; i < times.size(); ++i) traj.push(times[i], std::move(snaps[i]));
  if (times.size() > 1) traj.dt = times[1] - times[0];
  return traj;
}

}  // namespace degen
