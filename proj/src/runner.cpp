#include "degen/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "degen/ensemble.hpp"
#include "degen/evolution.hpp"
#include "degen/nonlinear.hpp"
#include "degen/norms.hpp"
#include "degen/pseudodiff.hpp"
#include "degen/smoothing.hpp"
#include "degen/spectral.hpp"

namespace fs = std::filesystem;

namespace degen {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return 2;
    case ErrorKind::Instability: return 3;
    case ErrorKind::NonConvergence: return 4;
    case ErrorKind::Divergence: return 5;
  }
  return 1;
}

namespace {

struct Context {
  const RunConfig& cfg;
  fs::path out;
  std::vector<SmoothingReport> reports;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> artifacts;
};

SpectralGrid grid_of(const RunConfig& c, int scale_N = 1, double scale_L = 1.0) {
  return create_grid(c.n, c.N * scale_N, c.L * scale_L);
}

std::vector<Field> members_of(const RunConfig& c, const SpectralGrid& grid) {
  EnsembleSpec spec;
  spec.family = parse_family(c.ensemble.family);
  spec.count = c.ensemble.count;
  spec.seed = c.ensemble_seed();
  spec.frequencies = c.ensemble.frequencies;
  spec.width = c.ensemble.width;
  return make_ensemble(spec, grid);
}

BFieldSpec b_of(const RunConfig& c) {
  if (c.b_kind == "decaying") return BFieldSpec::decaying(c.mu, c.sigma, c.alpha);
  if (c.b_kind == "drift") return BFieldSpec::drift(c.mu, c.alpha);
  return BFieldSpec::zero(c.alpha);
}

DoiParams doi_of(const RunConfig& c) {
  DoiParams d;
  d.sigma = c.sigma;
  d.cprime = c.cprime;
  d.sobolev_s = c.s;
  return d;
}

NonlinearitySpec nonlinearity_of(const RunConfig& c) {
  return {parse_nonlinearity_kind(c.nonlinearity), c.k, c.sign, c.beta};
}

SmoothingReport base_report(const RunConfig& c, const std::string& id) {
  SmoothingReport r;
  r.estimate_id = id;
  r.alpha = c.alpha;
  r.sigma = c.sigma;
  r.s = c.s;
  r.N = c.N;
  r.nt = c.nt;
  return r;
}

void save_traj(Context& ctx, const Trajectory& traj) {
  save_trajectory((ctx.out / "trajectory").string(), traj);
  ctx.artifacts.push_back("trajectory/manifest.json");
  ctx.artifacts.push_back("trajectory/snap_*.dsf1 (" + std::to_string(traj.size()) + " files)");
}

// ---------------------------------------------------------------------------

void run_evolve(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto grid = grid_of(c);
  const AlphaParams p(c.alpha);
  const auto members = members_of(c, grid);
  const Field& u0 = members.front();
  const BFieldSpec b = b_of(c);
  const Trajectory traj = solve_linear(u0, b, SourceSampler::none(), c.T, c.nt, p);
  save_traj(ctx, traj);
  auto rep = base_report(c, "evolve");
  double drift = 0.0;
  for (const auto& f : traj.snapshots) drift = std::max(drift, std::abs(l2_norm(f) - l2_norm(u0)));
  rep.add({"0", c.T, l2_norm(traj.back()), l2_norm(u0), l2_norm(traj.back()) / l2_norm(u0)});
  ctx.reports.push_back(rep);
  ctx.summary["norm_drift"] = drift;
  if (traj.size() >= 5) ctx.summary["pde_residual"] = residual_check(traj, b, SourceSampler::none(), p);
  if (b.kind == BFieldKind::Zero) {
    const auto exact = homogeneous_trajectory(u0, p, traj.times);
    double err = 0.0;
    for (std::size_t n = 0; n < traj.size(); ++n)
      err = std::max(err, max_abs_diff(traj.snapshots[n], exact.snapshots[n]));
    ctx.summary["closed_form_error"] = err;
  }
}

void run_sweep(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto grid = grid_of(c);
  const AlphaParams p(c.alpha);
  if (c.n == 1) {
    SweepOptions opt;
    opt.width = c.ensemble.width;
    opt.nt = c.nt;
    auto rep = frequency_sweep(p, c.ensemble.frequencies, c.T, grid, opt);
    rep.sigma = c.sigma;
    rep.s = c.s;
    ctx.reports.push_back(rep);
    ctx.summary["ratio_spread"] = rep.max_ratio() / rep.min_ratio();
    ctx.summary["half_derivative"] = rep.metadata["half_derivative"];
    return;
  }
  ctx.reports.push_back(base_report(c, "sh2"));
  auto& rep = ctx.reports.back();
  std::vector<double> times(c.nt + 1);
  for (int n = 0; n <= c.nt; ++n) times[n] = c.T * n / c.nt;
  double worst_additivity = 0.0;
  const double band = 0.25 * grid.xi_max();
  for (double xi0 : c.ensemble.frequencies) {
    require(std::abs(xi0) < band, "carrier " + std::to_string(xi0) + " is above the band limit");
    const double centre[2] = {-xi0 * p.theta(c.T), 0.0}, carrier[2] = {xi0, 0.0};
    const Field f = gaussian_packet(grid, c.ensemble.width, centre, carrier);
    require_resolved(f, "sweep packet");
    const auto traj = homogeneous_trajectory(f, p, times);
    require_resolved(traj.back(), "sweep packet at the final time");
    const auto cubes = sh2_cube_squares(traj, p);
    long double sum = 0.0L;
    double best = 0.0;
    for (double q : cubes) {
      sum += q;
      best = std::max(best, q);
    }
    const auto density = time_integrated_density(
        traj, [](const Field& u) { return fractional_derivative(u, 0.5); }, [&p](double t) { return p.rate(t); });
    long double global = 0.0L;
    for (double d : density) global += static_cast<long double>(d) * grid.cell_volume();
    worst_additivity = std::max(worst_additivity, static_cast<double>(std::abs(sum - global) / global));
    char id[32];
    std::snprintf(id, sizeof id, "%g", xi0);
    rep.add({id, c.T, std::sqrt(best), l2_norm(f), std::sqrt(best) / l2_norm(f)});
  }
  ctx.summary["ratio_spread"] = rep.max_ratio() / rep.min_ratio();
  ctx.summary["partition_additivity"] = worst_additivity;
}

void run_garding(Context& ctx) {
  const auto& c = ctx.cfg;
  const DoiParams d = doi_of(c);
  GardingOptions opt;
  opt.restrict_region = true;
  ctx.reports.push_back(base_report(c, "garding"));
  auto& rep = ctx.reports.back();
  const std::pair<const char*, SpectralGrid> cases[] = {
      {"base", grid_of(c)}, {"2N", grid_of(c, 2, 1.0)}, {"2L", grid_of(c, 1, 2.0)}};
  for (const auto& [id, g] : cases) {
    const double defect = garding_defect(doi_phase(d, g), d, opt);
    if (!std::isfinite(defect)) throw DivergenceError("Garding defect is not finite");
    rep.add({id, 0.0, defect, 0.0, defect});
  }
  ctx.summary["defect"] = rep.rows[0].lhs;
  ctx.summary["phase_bound"] = doi_phase_bound(d);
}

void run_picard(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto grid = grid_of(c);
  const AlphaParams p(c.alpha);
  const auto members = members_of(c, grid);
  const Field u0 = Complex(c.amplitude / l2_norm(members.front())) * members.front();
  PicardOptions opt;
  opt.nt = c.nt;
  opt.max_iter = c.max_iter;
  opt.tol = c.tol;
  opt.s = c.s;
  opt.throw_on_failure = false;
  const auto st = picard_solve(u0, nonlinearity_of(c), p, c.T, opt);
  ctx.reports.push_back(base_report(c, "picard"));
  auto& rep = ctx.reports.back();
  for (std::size_t m = 0; m < st.distances.size(); ++m) {
    if (!std::isfinite(st.distances[m]) || !std::isfinite(st.norms[m])) {
      ctx.summary["non_finite_at_iteration"] = m + 1;
      break;
    }
    const double r = st.norms[m] > 0.0 ? st.distances[m] / st.norms[m] : 0.0;
    rep.rows.push_back({"iter_" + std::to_string(m + 1), c.T, st.distances[m], st.norms[m], r});
  }
  rep.fitted_C = rep.max_ratio();
  ctx.summary["converged"] = st.converged;
  ctx.summary["iterations"] = st.iterations;
  ctx.summary["distances"] = st.distances;
  if (st.converged) save_traj(ctx, st.trajectory);
  if (!st.converged)
    throw ConvergenceError("Picard iteration did not converge in " + std::to_string(st.iterations) + " iterations");
}

void run_norm_equiv(Context& ctx) {
  const auto& c = ctx.cfg;
  const DoiParams d = doi_of(c);
  const auto grid = grid_of(c);
  const auto members = members_of(c, grid);
  const GridSymbol K = build_K(d, grid);
  ctx.reports.push_back(base_report(c, "norm_equiv"));
  auto& rep = ctx.reports.back();
  for (std::size_t m = 0; m < members.size(); ++m) {
    const double a = n_norm(members[m], K, c.s);
    const double b = sobolev_norm(members[m], c.s);
    rep.add({std::to_string(m), 0.0, a, b, a / b});
  }
  const double base = norm_equivalence_constant(members, d);
  const double refined = norm_equivalence_constant(members_of(c, grid_of(c, 2, 1.0)), d);
  ctx.summary["constant"] = base;
  ctx.summary["constant_refined"] = refined;
  ctx.summary["relative_change"] = std::abs(refined - base) / base;
  ctx.summary["bound"] = std::exp(doi_phase_bound(d)) + 1.0;
}

void run_energy(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto grid = grid_of(c);
  const AlphaParams p(c.alpha);
  const auto members = members_of(c, grid);
  const Field& u0 = members.front();
  const Field g = Complex(0.1) * members[members.size() > 1 ? 1 : 0];
  const SourceSampler f{[g, p](double t) { return Complex(p.rate(t)) * g; }};
  const BFieldSpec b = b_of(c);
  const int nt = (c.nt + 3) / 4 * 4;
  const Trajectory traj = solve_linear(u0, b, f, c.T, nt, p);
  const DoiParams d = doi_of(c);
  for (auto e : {EnergyEstimate::Sm1, EnergyEstimate::Sm2, EnergyEstimate::Sm3}) {
    auto rep = verify_energy_estimates(traj, f, b, d, e);
    ctx.summary[rep.estimate_id] = {{"C1", rep.metadata["C1"]}, {"C2", rep.metadata["C2"]},
                                    {"max_ratio", rep.max_ratio()}};
    ctx.reports.push_back(std::move(rep));
  }
}

void run_identity(Context& ctx) {
  const auto& c = ctx.cfg;
  require(c.n == 1, "identity-check is defined for n = 1");
  const auto grid = grid_of(c);
  const AlphaParams p(c.alpha);
  const auto members = members_of(c, grid);
  ctx.reports.push_back(base_report(c, "reparametrization"));
  auto& rep = ctx.reports.back();
  double worst = 0.0;
  for (std::size_t m = 0; m < members.size(); ++m) {
    const auto r = reparametrization_identity(members[m], p, c.T);
    worst = std::max(worst, r.discrepancy);
    rep.add({std::to_string(m), c.T, r.degenerate, r.standard, r.standard > 0.0 ? r.degenerate / r.standard : 0.0});
  }
  ctx.summary["discrepancy"] = worst;
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace

RunResult run(const RunConfig& config) {
  RunResult result;
  Context ctx{config, fs::path(config.output)};
  try {
    validate(config);
    fs::create_directories(ctx.out);
    switch (config.experiment) {
      case Experiment::Evolve: run_evolve(ctx); break;
      case Experiment::SmoothingSweep: run_sweep(ctx); break;
      case Experiment::GardingCheck: run_garding(ctx); break;
      case Experiment::Picard: run_picard(ctx); break;
      case Experiment::NormEquiv: run_norm_equiv(ctx); break;
      case Experiment::EnergyCheck: run_energy(ctx); break;
      case Experiment::IdentityCheck: run_identity(ctx); break;
    }
  } catch (const Error& e) {
    result.exit_code = exit_code(e.kind());
    result.message = e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.message = e.what();
  }

  std::error_code ec;
  fs::create_directories(ctx.out, ec);
  if (ec) {
    if (result.exit_code == 0) result.exit_code = 2;
    result.message = "cannot create output directory " + ctx.out.string();
    return result;
  }
  ctx.summary["experiment"] = experiment_name(config.experiment);
  ctx.summary["status"] = result.exit_code == 0 ? "ok" : "failed";
  ctx.summary["exit_code"] = result.exit_code;
  if (!result.message.empty()) ctx.summary["error"] = result.message;
  ctx.summary["reports"] = report_summary(ctx.reports);
  try {
    save_report_csv((ctx.out / "report.csv").string(), ctx.reports);
    write_json(ctx.out / "summary.json", ctx.summary);
    ctx.artifacts.insert(ctx.artifacts.begin(), {"report.csv", "summary.json"});
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(config)));
    write_json(ctx.out / "manifest.json", {{"tool", "degenlab"},
                                           {"version", "0.3.0"},
                                           {"config", to_json(config)},
                                           {"config_hash", hash},
                                           {"seed", config.seed},
                                           {"timestamp", timestamp()},
                                           {"status", ctx.summary["status"]},
                                           {"artifacts", ctx.artifacts}});
  } catch (const std::exception& e) {
    if (result.exit_code == 0) result.exit_code = 2;
    result.message = e.what();
  }
  result.summary = ctx.summary;
  return result;
}

}  // namespace degen
