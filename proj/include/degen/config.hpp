#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degen/field.hpp"
#include "json.hpp"

namespace degen {

enum class Experiment { Evolve, SmoothingSweep, GardingCheck, Picard, NormEquiv, EnergyCheck, IdentityCheck };

Experiment parse_experiment(const std::string& name);
std::string experiment_name(Experiment e);

struct EnsembleConfig {
  std::string family = "gaussian";
  int count = 10;
  /// Falls back to the run seed when absent.
  std::optional<std::uint64_t> seed;
  std::vector<double> frequencies{4.0, 8.0, 16.0, 32.0};
  double width = 1.0;

  bool operator==(const EnsembleConfig&) const = default;
};

/// Fully validated run description. Field names match the JSON keys.
struct RunConfig {
  Experiment experiment = Experiment::Evolve;
  // grid
  int n = 1;
  int N = 256;
  double L = 16.0;
  // physics
  double alpha = 1.0;
  double beta = 2.0;
  int k = 1;
  double sigma = 2.0;
  std::vector<Complex> mu;
  int sign = 1;
  std::string b_kind = "zero";
  std::string nonlinearity = "power";
  // numerics
  double T = 1.0;
  int nt = 256;
  int n_quad = 64;
  double tol = 1e-10;
  int max_iter = 30;
  double s = 0.0;
  int N_weight = 1;
  double cprime = 1.0;
  double amplitude = 0.1;
  EnsembleConfig ensemble{};
  std::string output = "degenlab_out";
  std::uint64_t seed = 1;

  bool operator==(const RunConfig&) const = default;

  std::uint64_t ensemble_seed() const { return ensemble.seed.value_or(seed); }
};

/// Applies defaults, rejects unknown keys and validates every field.
RunConfig parse_config_json(const nlohmann::json& j);
/// Reads a JSON file; missing file and malformed JSON are distinct errors.
RunConfig parse_config(const std::string& path);
/// Every field, defaults included; parse_config_json(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& c);
/// Throws ValidationError naming the first violated constraint.
void validate(const RunConfig& c);

/// FNV-1a 64 of the compact JSON dump of to_json(c).
std::uint64_t config_hash(const RunConfig& c);

}  // namespace degen
