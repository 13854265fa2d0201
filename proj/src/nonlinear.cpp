#include "degen/nonlinear.hpp"

#include <cmath>
#include <random>

#include "degen/ensemble.hpp"
#include "degen/error.hpp"
#include "degen/norms.hpp"
#include "degen/parallel.hpp"
#include "degen/quadrature.hpp"
#include "degen/spectral.hpp"

namespace degen {

void NonlinearitySpec::validate(double alpha) const {
  require(k >= 1, "nonlinearity exponent k must be at least 1");
  require(sign == 1 || sign == -1, "nonlinearity sign must be +1 or -1");
  if (kind == NonlinearityKind::Derivative)
    require(beta >= alpha, "derivative nonlinearity needs beta >= alpha");
}

bool NonlinearitySpec::picard_supported(double alpha) const {
  return kind == NonlinearityKind::Power || beta > alpha;
}

NonlinearityKind parse_nonlinearity_kind(const std::string& name) {
  if (name == "power") return NonlinearityKind::Power;
  if (name == "derivative") return NonlinearityKind::Derivative;
  throw ValidationError("unknown nonlinearity kind '" + name + "'");
}

namespace {

Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

}  // namespace

Field eval_nonlinearity(const NonlinearitySpec& spec, double t, const Field& u) {
  require(spec.k >= 1, "nonlinearity exponent k must be at least 1");
  require(u.is_physical(), "eval_nonlinearity: field must be physical");
  Field out(u.grid(), Space::Physical);
  if (spec.kind == NonlinearityKind::Power) {
    for (std::size_t i = 0; i < u.size(); ++i)
      out[i] = static_cast<double>(spec.sign) * u[i] * std::pow(std::norm(u[i]), spec.k);
  } else {
    const Field grad = to_physical(divergence_derivative(to_spectral(u)));
    const double amp = spec.sign * std::pow(t, spec.beta);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = amp * grad[i] * ipow(u[i], 2 * spec.k);
  }
  return dealias(out);
}

// ---------------------------------------------------------------------------
// Distance

namespace {

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  require(a.size() == b.size() && a.size() >= 1, "trajectories must have matching sample counts");
  Trajectory d;
  for (std::size_t n = 0; n < a.size(); ++n) {
    require(a.times[n] == b.times[n], "trajectories must share sample times");
    d.push(a.times[n], as_physical(a.snapshots[n]) - as_physical(b.snapshots[n]));
  }
  return d;
}

double trajectory_x_norm(const Trajectory& w, double alpha, double s) {
  const auto density = time_integrated_density(
      w, [s](const Field& f) { return fractional_derivative(f, 0.5 + s); },
      [alpha](double t) { return std::pow(t, alpha); });
  const double smoothing = sup_space_time(w.grid(), density, 1.0);
  double energy = 0.0, mass = 0.0;
  for (const auto& f : w.snapshots) {
    energy = std::max(energy, homogeneous_sobolev_norm(f, s));
    mass = std::max(mass, l2_norm(f));
  }
  return smoothing + energy + mass;
}

}  // namespace

double x_distance(const Trajectory& a, const Trajectory& b, double alpha, double s) {
  return trajectory_x_norm(difference(a, b), alpha, s);
}

double x_norm(const Trajectory& a, double alpha, double s) { return trajectory_x_norm(a, alpha, s); }

// ---------------------------------------------------------------------------
// Picard

namespace {

double uniform_step(const Trajectory& u) {
  require(u.size() >= 4, "Picard map needs at least 3 time steps");
  require(u.times.front() == 0.0, "Picard trajectories start at t = 0");
  const double h = u.times[1] - u.times[0];
  for (std::size_t n = 1; n < u.size(); ++n)
    require(std::abs(u.times[n] - u.times[n - 1] - h) <= 1e-12 * std::max(1.0, u.times.back()),
            "Picard trajectories need uniform sample times");
  return h;
}

Trajectory uniform_trajectory(const Field& u0, const AlphaParams& p, double T, int nt) {
  std::vector<double> times(nt + 1);
  for (int n = 0; n <= nt; ++n) times[n] = n == nt ? T : T * n / nt;
  return homogeneous_trajectory(as_physical(u0), p, times);
}

}  // namespace

Trajectory picard_map(const Field& u0, const Trajectory& u, const NonlinearitySpec& spec,
                      const AlphaParams& p) {
  spec.validate(p.alpha());
  u.validate();
  require_same_grid(u0, u.snapshots.front(), "picard_map");
  const double h = uniform_step(u);
  const std::size_t count = u.size();
  const Complex minus_i(0.0, -1.0);

  // g_l = W(0, t_l) (-i F(u(t_l))), kept in spectral space.
  std::vector<Field> pulled(count, Field(u0.grid(), Space::Spectral));
  parallel_for(count, [&](std::size_t l) {
    Field hat = to_spectral(eval_nonlinearity(spec, u.times[l], as_physical(u.snapshots[l])));
    hat *= minus_i;
    apply_dispersion(hat, p.theta(0.0, u.times[l]));
    pulled[l] = std::move(hat);
  });

  const Field hat0 = as_spectral(u0);
  std::vector<Field> out(count, Field(u0.grid(), Space::Physical));
  parallel_for(count, [&](std::size_t j) {
    Field acc = hat0;
    if (j > 0) {
      const auto w = running_integral_weights(static_cast<int>(j), h);
      for (std::size_t l = 0; l < w.size(); ++l) axpy(w[l], pulled[l], acc);
    }
    apply_dispersion(acc, p.theta(u.times[j], 0.0));
    out[j] = to_physical(acc);
  });

  Trajectory next;
  next.scheme = "picard";
  for (std::size_t j = 0; j < count; ++j) next.push(u.times[j], std::move(out[j]));
  next.dt = h;
  return next;
}

PicardState picard_solve(const Field& u0, const NonlinearitySpec& spec, const AlphaParams& p, double T,
                         const PicardOptions& options) {
  spec.validate(p.alpha());
  if (!spec.picard_supported(p.alpha()))
    throw ValidationError("Picard iteration is not offered for beta = alpha; use time stepping");
  require(T > 0.0, "final time must be positive");
  require(options.nt >= 3, "Picard needs nt >= 3");
  require(options.max_iter >= 1, "max_iter must be positive");
  require(options.tol > 0.0, "tolerance must be positive");
  require(options.s >= 0.0, "distance index s must be non-negative");

  PicardState state;
  Trajectory current = uniform_trajectory(u0, p, T, options.nt);
  for (int m = 0; m < options.max_iter; ++m) {
    Trajectory next = picard_map(u0, current, spec, p);
    const double d = x_distance(next, current, p.alpha(), options.s);
    const double nrm = x_norm(next, p.alpha(), options.s);
    if (!std::isfinite(d) || !std::isfinite(nrm)) {
      state.distances.push_back(d);
      state.norms.push_back(nrm);
      state.iterations = m + 1;
      break;
    }
    state.distances.push_back(d);
    state.norms.push_back(nrm);
    state.iterations = m + 1;
    current = std::move(next);
    if (d == 0.0 || d <= options.tol * nrm) {
      state.converged = true;
      break;
    }
  }
  current.scheme = "picard";
  current.metadata["iterations"] = state.iterations;
  current.metadata["converged"] = state.converged;
  current.metadata["distances"] = state.distances;
  state.trajectory = std::move(current);
  if (!state.converged && options.throw_on_failure) {
    std::string hist;
    for (double d : state.distances) hist += (hist.empty() ? "" : ", ") + std::to_string(d);
    throw ConvergenceError("Picard iteration did not converge in " + std::to_string(state.iterations) +
                           " iterations; distances [" + hist + "]");
  }
  return state;
}

// ---------------------------------------------------------------------------
// Stepping

double nonlinear_stable_step(const NonlinearitySpec& spec, const SpectralGrid& grid, double amplitude,
                             double T) {
  double lip = (2 * spec.k + 1) * std::pow(amplitude, 2 * spec.k);
  if (spec.kind == NonlinearityKind::Derivative) lip *= 1.0 + std::pow(T, spec.beta) * grid.xi_max();
  if (lip == 0.0) return INFINITY;
  return 0.5 / lip;
}

Trajectory step_nonlinear(const Field& u0, const NonlinearitySpec& spec, const BFieldSpec& bspec,
                          const AlphaParams& p, double T, int nt) {
  spec.validate(p.alpha());
  bspec.validate(u0.grid().dim());
  require(nt >= 1, "nt must be at least 1");
  require(T >= 0.0, "final time must be non-negative");
  Trajectory traj;
  traj.scheme = "lawson-rk4";
  traj.metadata["blow_up"] = false;
  Field u = as_physical(u0);
  traj.push(0.0, u);
  traj.metadata["last_good_time"] = 0.0;
  if (T == 0.0) return traj;
  const double dt = T / nt;
  traj.dt = dt;
  const double limit = std::min(stable_step(bspec, u0.grid(), T),
                                nonlinear_stable_step(spec, u0.grid(), max_abs(u), T));
  if (dt > limit)
    throw InstabilityError("time step " + std::to_string(dt) + " exceeds the stability bound " +
                           std::to_string(limit));
  const SourceSampler none = SourceSampler::none();
  const RhsFunction rhs = [&](double tau, const Field& w) {
    Field r = first_order_rhs(bspec, none, tau, w);
    axpy(Complex(0.0, -1.0), eval_nonlinearity(spec, tau, w), r);
    return r;
  };
  for (int n = 0; n < nt; ++n) {
    const double t = n * dt;
    Field next = lawson_rk4_step(u, t, dt, p, rhs);
    bool finite = true;
    for (const auto& v : next.values())
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        finite = false;
        break;
      }
    if (!finite || max_abs(next) > 1e6) {
      traj.metadata["blow_up"] = true;
      return traj;
    }
    u = std::move(next);
    const double tn = n + 1 == nt ? T : (n + 1) * dt;
    traj.push(tn, u);
    traj.metadata["last_good_time"] = tn;
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Contraction probe

ContractionStats contraction_probe(const Field& u0, const NonlinearitySpec& spec, const AlphaParams& p,
                                   double T, double radius, int n_pairs, const ContractionOptions& options) {
  spec.validate(p.alpha());
  if (!spec.picard_supported(p.alpha()))
    throw ValidationError("contraction probe is not offered for beta = alpha");
  require(T > 0.0, "final time must be positive");
  require(radius > 0.0, "ball radius must be positive");
  require(n_pairs >= 1, "need at least one pair");
  require(options.nt >= 3, "probe needs nt >= 3");

  const auto& grid = u0.grid();
  const int dim = grid.dim();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> fraction(0.0, 1.0);

  const Trajectory centre = uniform_trajectory(u0, p, T, options.nt);
  auto member = [&]() {
    std::array<double, 2> c{}, k{};
    for (int j = 0; j < dim; ++j) {
      c[j] = unit(rng);
      k[j] = 2.0 * unit(rng);
    }
    const Field psi = gaussian_packet(grid, options.width, {c.data(), 2}, {k.data(), 2});
    require_resolved(psi, "probe member");
    const Trajectory free = uniform_trajectory(psi, p, T, options.nt);
    const double r = 1.0 - fraction(rng);  // (0, 1]
    const double scale = radius * r / x_norm(free, p.alpha(), options.s);
    Trajectory out;
    for (std::size_t n = 0; n < free.size(); ++n)
      out.push(free.times[n], centre.snapshots[n] + Complex(scale) * free.snapshots[n]);
    return out;
  };

  ContractionStats stats;
  for (int q = 0; q < n_pairs; ++q) {
    const Trajectory a = member();
    const Trajectory b = member();
    const double d = x_distance(a, b, p.alpha(), options.s);
    if (d == 0.0) continue;
    const double dphi =
        x_distance(picard_map(u0, a, spec, p), picard_map(u0, b, spec, p), p.alpha(), options.s);
    stats.ratios.push_back(dphi / d);
  }
  stats.samples = static_cast<int>(stats.ratios.size());
  for (double r : stats.ratios) {
    stats.max = std::max(stats.max, r);
    stats.mean += r;
  }
  if (stats.samples > 0) stats.mean /= stats.samples;
  return stats;
}

}  // namespace degen
