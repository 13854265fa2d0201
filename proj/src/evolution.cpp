#include "degen/evolution.hpp"

#include <cmath>

#include "degen/error.hpp"
#include "degen/spectral.hpp"

namespace degen {

namespace {
constexpr Complex kI{0.0, 1.0};
}

void BFieldSpec::validate(int dim) const {
  require(alpha > 0.0, "b-field alpha must be positive");
  if (kind == BFieldKind::Zero) return;
  require(static_cast<int>(mu.size()) == dim, "b-field amplitude must have one entry per dimension");
  if (kind == BFieldKind::Decaying) require(sigma > 1.0, "b-field decay exponent sigma must exceed 1");
}

Complex BFieldSpec::value(int j, double t, std::span<const double> x) const {
  if (kind == BFieldKind::Zero) return 0.0;
  const double ta = std::pow(t, alpha);
  if (kind == BFieldKind::ConstantDrift) return ta * mu[j];
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return ta * mu[j] * std::pow(1.0 + r2, -0.5 * sigma);
}

double BFieldSpec::sup_abs(double t) const {
  if (kind == BFieldKind::Zero) return 0.0;
  double m = 0.0;
  for (const auto& v : mu) m = std::max(m, std::abs(v));
  return std::pow(t, alpha) * m;
}

std::vector<Field> eval_b(const BFieldSpec& spec, double t, const SpectralGrid& grid) {
  spec.validate(grid.dim());
  require(t >= 0.0, "b-field time must be non-negative");
  std::vector<Field> out;
  for (int j = 0; j < grid.dim(); ++j) {
    Field b(grid, Space::Physical);
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto x = grid.position(i);
      b[i] = spec.value(j, t, std::span<const double>(x.data(), grid.dim()));
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<double> check_decay(const BFieldSpec& spec, const SpectralGrid& grid,
                                const std::vector<double>& times, double interior) {
  spec.validate(grid.dim());
  std::vector<double> worst(3, 0.0);
  if (spec.kind == BFieldKind::Zero) return worst;
  const double L = grid.half_length();
  for (double t : times) {
    if (t <= 0.0) continue;
    const double ta = std::pow(t, spec.alpha);
    const auto b = eval_b(spec, t, grid);
    for (int j = 0; j < grid.dim(); ++j) {
      // Every multi-index up to order two.
      std::vector<std::pair<int, Field>> derivs;
      derivs.emplace_back(0, b[j]);
      for (int a = 0; a < grid.dim(); ++a) {
        const Field da = partial_derivative(b[j], a);
        derivs.emplace_back(1, da);
        for (int c = a; c < grid.dim(); ++c) derivs.emplace_back(2, partial_derivative(da, c));
      }
      for (const auto& [order, d] : derivs) {
        for (std::size_t i = 0; i < d.size(); ++i) {
          const auto x = grid.position(i);
          if (std::abs(x[0]) > interior * L || std::abs(x[1]) > interior * L) continue;
          const double r2 = x[0] * x[0] + x[1] * x[1];
          const double envelope = ta * std::pow(1.0 + r2, -0.5 * (spec.sigma + order));
          const double ratio = std::abs(d[i]) / envelope;
          worst[order] = std::max(worst[order], ratio);
        }
      }
    }
  }
  return worst;
}

double stable_step(const BFieldSpec& spec, const SpectralGrid& grid, double T) {
  const double s = spec.sup_abs(T);
  if (s == 0.0) return INFINITY;
  return 0.5 / (s * grid.xi_max());
}

Field first_order_rhs(const BFieldSpec& spec, const SourceSampler& f, double t, const Field& u) {
  const auto& g = u.grid();
  Field out(g, Space::Physical);
  if (spec.kind != BFieldKind::Zero) {
    const Field hat = as_spectral(u);
    for (int j = 0; j < g.dim(); ++j) {
      const Field du = to_physical(partial_derivative(hat, j));
      for (std::size_t i = 0; i < out.size(); ++i) {
        const auto x = g.position(i);
        out[i] += kI * spec.value(j, t, std::span<const double>(x.data(), g.dim())) * du[i];
      }
    }
  }
  if (!f.empty()) {
    const Field fv = f(t);
    require_same_grid(u, fv, "source");
    out += as_physical(fv);
  }
  return out;
}

namespace {

// Stage derivative in the frame frozen at t0: W(t0, tau) N(tau, W(tau, t0) v).
Field frozen_rhs(const Field& v, double t0, double tau, const AlphaParams& p, const RhsFunction& rhs) {
  const Field u = w_alpha(v, tau, t0, p);
  Field hat = to_spectral(as_physical(rhs(tau, u)));
  // W(t0, tau) is the multiplier exp(-i Theta(t0, tau) |xi|^2).
  apply_dispersion(hat, p.theta(t0, tau));
  return to_physical(hat);
}

}  // namespace

Field lawson_rk4_step(const Field& u, double t, double dt, const AlphaParams& p, const RhsFunction& rhs) {
  require(dt > 0.0, "time step must be positive");
  require(t >= 0.0, "step start time must be non-negative");
  const Field v = as_physical(u);
  const double h = dt;
  const Field k1 = frozen_rhs(v, t, t, p, rhs);
  const Field k2 = frozen_rhs(v + Complex(0.5 * h) * k1, t, t + 0.5 * h, p, rhs);
  const Field k3 = frozen_rhs(v + Complex(0.5 * h) * k2, t, t + 0.5 * h, p, rhs);
  const Field k4 = frozen_rhs(v + Complex(h) * k3, t, t + h, p, rhs);
  Field next = v;
  axpy(h / 6.0, k1, next);
  axpy(h / 3.0, k2, next);
  axpy(h / 3.0, k3, next);
  axpy(h / 6.0, k4, next);
  return w_alpha(next, t + h, t, p);
}

Field step_linear(const Field& u, double t, double dt, const BFieldSpec& spec, const SourceSampler& f,
                  const AlphaParams& p) {
  spec.validate(u.grid().dim());
  return lawson_rk4_step(u, t, dt, p,
                         [&](double tau, const Field& w) { return first_order_rhs(spec, f, tau, w); });
}

Trajectory solve_linear(const Field& u0, const BFieldSpec& spec, const SourceSampler& f, double T,
                        int nt, const AlphaParams& p) {
  require(nt >= 1, "nt must be at least 1");
  require(T >= 0.0, "final time must be non-negative");
  spec.validate(u0.grid().dim());
  Trajectory traj;
  traj.scheme = "lawson-rk4";
  traj.push(0.0, as_physical(u0));
  if (T == 0.0) return traj;
  const double dt = T / nt;
  traj.dt = dt;
  const double limit = stable_step(spec, u0.grid(), T);
  if (dt > limit)
    throw InstabilityError("time step " + std::to_string(dt) + " exceeds the stability bound " +
                           std::to_string(limit));
  Field u = as_physical(u0);
  for (int n = 0; n < nt; ++n) {
    const double t = n * dt;
    u = step_linear(u, t, dt, spec, f, p);
    traj.push(n + 1 == nt ? T : (n + 1) * dt, u);
  }
  return traj;
}

double residual_check(const Trajectory& traj, const BFieldSpec& spec, const SourceSampler& f,
                      const AlphaParams& p) {
  require(traj.size() >= 5, "residual check needs at least four steps");
  traj.validate();
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < traj.size(); ++n) {
    const double dt = 0.5 * (traj.times[n + 1] - traj.times[n - 1]);
    const double t = traj.times[n];
    const Field& u = traj.snapshots[n];
    Field r = Complex(0.5 / dt) * (as_physical(traj.snapshots[n + 1]) - as_physical(traj.snapshots[n - 1]));
    r -= Complex(0.0, p.rate(t)) * as_physical(laplacian(u));
    r -= first_order_rhs(spec, f, t, u);
    const double scale = sobolev_norm(u, 2.0);
    const double res = l2_norm(r);
    worst = std::max(worst, scale > 0.0 ? res / scale : res);
  }
  return worst;
}

}  // namespace degen
