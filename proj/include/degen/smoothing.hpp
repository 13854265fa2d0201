#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "degen/evolution.hpp"
#include "degen/field.hpp"
#include "degen/nonlinear.hpp"
#include "degen/propagator.hpp"
#include "degen/pseudodiff.hpp"
#include "degen/trajectory.hpp"
#include "degen/weight.hpp"

namespace degen {

struct ReportRow {
  std::string member_id;
  double T = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// One estimate measured over members. fitted_C is the largest ratio.
struct SmoothingReport {
  std::string estimate_id;
  double alpha = 0.0;
  double sigma = 0.0;
  double s = 0.0;
  int N = 0;
  int nt = 0;
  std::vector<ReportRow> rows;
  double fitted_C = 0.0;
  nlohmann::json metadata = nlohmann::json::object();

  void add(ReportRow row);
  double max_ratio() const;
  double min_ratio() const;
  double mean_ratio() const;
};

/// CSV with header estimate_id,member_id,alpha,sigma,s,T,N,nt,lhs,rhs,ratio,fitted_C.
void write_report_csv(std::ostream& os, const std::vector<SmoothingReport>& reports);
void save_report_csv(const std::string& path, const std::vector<SmoothingReport>& reports);
/// max/mean/min ratios and metadata per estimate.
nlohmann::json report_summary(const std::vector<SmoothingReport>& reports);

// ---------------------------------------------------------------------------
// Norms

/// sup_x (int_0^T t^alpha |D^{1/2} u|^2 dt)^{1/2}, trapezoid in t. 1D only.
double norm_sh1(const Trajectory& traj, const AlphaParams& p);
/// Per-cube int_Q int_0^T t^alpha |D^{1/2} u|^2, by cube index (row-major). 2D only.
std::vector<double> sh2_cube_squares(const Trajectory& traj, const AlphaParams& p, double cube_size = 1.0);
/// sup over cubes of the square root of the cube integral. 2D only.
double norm_sh2(const Trajectory& traj, const AlphaParams& p, double cube_size = 1.0);

enum class MixedNorm { L1xL2t, L1tL2x };
/// ||g||_{L1_x L2_t} or ||g||_{L1_t L2_x}, inner norm first; trapezoid in t.
double norm_rhs_inhomogeneous(const Trajectory& g, MixedNorm variant);

/// int_0^T int t^alpha lambda |Lambda^{s+1/2} u|^2 dx dt (the squared quantity), trapezoid in t.
double weighted_smoothing_norm(const Trajectory& traj, const AlphaParams& p, const WeightFunction& lambda,
                               double s);
double weighted_smoothing_norm(const Trajectory& traj, const AlphaParams& p, const DoiParams& d);

struct SourceNorm {
  double value = 0.0;
  bool divergent = false;
};

/// int_0^T int t^{-alpha} lambda^{-1} |Lambda^{s-1/2} f|^2 dx dt by the midpoint rule on
/// `times`. Flags divergence when the first-midpoint integrand exceeds 1e12 or the
/// integrand behaves like t^{-gamma} with gamma >= 0.95 near t = 0.
SourceNorm weighted_source_norm(const SourceSampler& f, const std::vector<double>& times,
                                const AlphaParams& p, const WeightFunction& lambda, double s);
SourceNorm weighted_source_norm(const SourceSampler& f, const std::vector<double>& times,
                                const AlphaParams& p, const DoiParams& d);

// ---------------------------------------------------------------------------
// Experiments

struct SweepOptions {
  double width = 1.0;
  int nt = 2048;
  /// Centers the packet at -xi0 Theta(T) so it crosses the origin at mid-flight.
  bool centre_path = true;
};

/// sh1 ratio for unit packets at each carrier. Rows carry lhs = sh1, rhs = ||f||,
/// and metadata holds ||D^{1/2} f|| per carrier.
SmoothingReport frequency_sweep(const AlphaParams& p, const std::vector<double>& carriers, double T,
                                const SpectralGrid& grid, const SweepOptions& options = {});

struct ReparametrizationResult {
  double degenerate = 0.0;  ///< max_x of the t^alpha-weighted integral
  double standard = 0.0;    ///< max_x of the reparametrized integral
  double discrepancy = 0.0; ///< max_x |difference| / max_x standard
};

/// Compares int_0^T t^alpha |D^{1/2} W(t) f|^2 dt with int_0^{Theta(T)} |D^{1/2} e^{i s Lap} f|^2 ds
/// node by node, both by graded Gauss-Legendre in their own time variable.
ReparametrizationResult reparametrization_identity(const Field& f, const AlphaParams& p, double T);

enum class EnergyEstimate { Sm1, Sm2, Sm3 };
std::string estimate_name(EnergyEstimate e);

/// LHS and bracketed RHS of the chosen energy estimate on horizons T/4, T/2, T of the
/// trajectory (nt divisible by 4). log(LHS/RHS) is fitted as log C1 + C2 E(T) with
/// E = Theta(T) + T (sm1, sm2) or Theta(T) (sm3). Row ratios are LHS / (RHS e^{C2 E}).
SmoothingReport verify_energy_estimates(const Trajectory& traj, const SourceSampler& f,
                                        const BFieldSpec& spec, const DoiParams& d, EnergyEstimate which);

struct NDerivativeReport {
  std::vector<double> times;
  std::vector<double> derivative;  ///< d N(u)^2 / dt, centered
  std::vector<double> n_squared;
  std::vector<double> smoothing;   ///< t^alpha ||lambda^{1/2} Lambda^{1/2} K u||^2
  std::vector<double> forcing;     ///< N(u) N(f)
  /// Smallest C with dN^2/dt <= C t^alpha N^2 + 2 N(u) N(f) at every interior time.
  double fitted_growth = 0.0;
  /// max over times of (dN^2/dt - 2 N(u) N(f)) / max(2 N(u) N(f), tiny).
  double forcing_excess = 0.0;
  double max_abs_derivative = 0.0;
};

/// K = e^p <xi>^s with p the escape function of `d`, or p = 0 when with_phase is false.
NDerivativeReport n_derivative_check(const Trajectory& traj, const SourceSampler& f, const BFieldSpec& spec,
                                     const DoiParams& d, bool with_phase = true);

/// sup_t ||<x>^{2n_w} W(t) u0||_{H^s}^2 / ((1 + T^{2 n_w})^2 ||<x>^{2 n_w} u0||_{H^{s+2 n_w}}^2)
/// at each horizon, divided by the value at T = 1. Horizons must include 1.
/// Metadata keeps the ratio with c = 1 (unfitted_ratio) and with the unsquared
/// factor (unsquared_ratio).
SmoothingReport lem613_check(const Field& u0, const AlphaParams& p, const std::vector<double>& horizons,
                             int n_weight, double s, int nt_per_unit = 64);

/// ||<x>^{2N} f g||_s^2 / (||<x>^{2N} f||^2_{n/2+eps} ||g||_s^2 + ||<x>^{2N} g||^2_{n/2+eps} ||f||_s^2).
double product_estimate_check(const Field& f, const Field& g, double s, int n_weight, double eps);

struct DualityResult {
  double homogeneous_constant = 0.0;   ///< max sh1 ratio over the ensemble
  double inhomogeneous_constant = 0.0; ///< max ratio for the adjoint estimate
};

/// Homogeneous constant from sh1 on the members, inhomogeneous constant from
/// ||D^{1/2} int t^{alpha/2} W(0,t) g dt|| / ||g||_{L1_x L2_t} with g concentrated
/// at the sh1 maximizer and time profile conjugate to the member's trace there.
DualityResult duality_check(const std::vector<Field>& members, const AlphaParams& p, double T, int nt);

/// max over members of max(N(u)/||u||_s, ||u||_s/N(u)).
double norm_equivalence_constant(const std::vector<Field>& members, const DoiParams& d);

struct NonlinearSmoothingOptions {
  /// Members are rescaled to this L2 norm before solving.
  double amplitude = 0.1;
  PicardOptions picard{};
  /// Steps for the beta = alpha case, which is solved by time stepping.
  int step_nt = 256;
};

/// For each member u0 solves the nonlinear problem on [0, T] (Picard, or stepping when
/// beta = alpha) and reports lhs = weighted_smoothing_norm, rhs = ||u0||_s^2.
/// Estimate id is nlp1 (power) or nlp2 (derivative). Metadata records the solver
/// and whether the regularity hypotheses of the well-posedness results hold.
SmoothingReport nonlinear_smoothing_report(const std::vector<Field>& members, const NonlinearitySpec& spec,
                                           const AlphaParams& p, double T, const DoiParams& d,
                                           const NonlinearSmoothingOptions& options = {});

}  // namespace degen
