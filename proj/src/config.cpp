#include "degen/config.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "degen/error.hpp"

namespace degen {

namespace {

constexpr std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::Evolve, "evolve"},          {Experiment::SmoothingSweep, "smoothing-sweep"},
    {Experiment::GardingCheck, "garding-check"}, {Experiment::Picard, "picard"},
    {Experiment::NormEquiv, "norm-equiv"},   {Experiment::EnergyCheck, "energy-check"},
    {Experiment::IdentityCheck, "identity-check"},
};

const std::set<std::string> kKeys = {"experiment", "n", "N", "L", "alpha", "beta", "k", "sigma", "mu", "sign",
                                     "b_kind", "nonlinearity", "T", "nt", "n_quad", "tol", "max_iter", "s",
                                     "N_weight", "cprime", "amplitude", "ensemble", "output", "seed"};
const std::set<std::string> kEnsembleKeys = {"family", "count", "seed", "frequencies", "width"};

template <class T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string("config key '") + key + "' has the wrong type");
  }
}

Complex read_complex(const nlohmann::json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ValidationError("config key 'mu' entries must be numbers or [re, im] pairs");
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  for (const auto& [e, s] : kExperiments)
    if (name == s) return e;
  throw ValidationError("unknown experiment '" + name + "'");
}

std::string experiment_name(Experiment e) {
  for (const auto& [x, s] : kExperiments)
    if (x == e) return s;
  return "evolve";
}

void validate(const RunConfig& c) {
  require(c.n == 1 || c.n == 2, "n must be 1 or 2");
  require(c.N >= 8 && std::has_single_bit(static_cast<unsigned>(c.N)), "N must be a power of two >= 8");
  require(c.L > 0.0 && std::isfinite(c.L), "L must be positive");
  require(c.alpha > 0.0 && std::isfinite(c.alpha), "alpha must be positive");
  require(c.sigma > 1.0, "sigma must exceed 1 (decay condition on b)");
  require(c.beta >= c.alpha, "beta must be >= alpha");
  require(c.k >= 1, "k must be at least 1");
  require(c.sign == 1 || c.sign == -1, "sign must be +1 or -1");
  require(c.b_kind == "zero" || c.b_kind == "decaying" || c.b_kind == "drift",
          "b_kind must be one of zero, decaying, drift");
  if (c.b_kind != "zero")
    require(static_cast<int>(c.mu.size()) == c.n, "mu must have n components when b_kind is not zero");
  require(c.nonlinearity == "power" || c.nonlinearity == "derivative",
          "nonlinearity must be power or derivative");
  require(c.T > 0.0 && std::isfinite(c.T), "T must be positive");
  require(c.nt >= 1, "nt must be at least 1");
  require(c.n_quad >= 2, "n_quad must be at least 2");
  require(c.tol > 0.0, "tol must be positive");
  require(c.max_iter >= 1, "max_iter must be at least 1");
  require(std::isfinite(c.s), "s must be finite");
  require(c.N_weight >= 1, "N_weight must be at least 1");
  require(c.cprime > 0.0, "cprime must be positive");
  require(c.amplitude > 0.0, "amplitude must be positive");
  require(c.ensemble.family == "gaussian" || c.ensemble.family == "modulated_gaussian" ||
              c.ensemble.family == "random_bandlimited",
          "ensemble.family must be gaussian, modulated_gaussian or random_bandlimited");
  require(c.ensemble.count >= 1, "ensemble.count must be at least 1");
  require(c.ensemble.width > 0.0, "ensemble.width must be positive");
  require(!c.output.empty(), "output must not be empty");
}

RunConfig parse_config_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.count(key)) throw ValidationError("unknown config key '" + key + "'");
  for (const char* key : {"experiment", "n", "N", "L", "alpha"})
    if (!j.contains(key)) throw ValidationError(std::string("missing required config key '") + key + "'");

  RunConfig c;
  std::string exp;
  read(j, "experiment", exp);
  c.experiment = parse_experiment(exp);
  read(j, "n", c.n);
  read(j, "N", c.N);
  read(j, "L", c.L);
  read(j, "alpha", c.alpha);
  c.beta = c.alpha + 1.0;
  read(j, "beta", c.beta);
  read(j, "k", c.k);
  read(j, "sigma", c.sigma);
  if (j.contains("mu")) {
    if (!j["mu"].is_array()) throw ValidationError("config key 'mu' must be an array");
    for (const auto& v : j["mu"]) c.mu.push_back(read_complex(v));
  }
  read(j, "sign", c.sign);
  read(j, "b_kind", c.b_kind);
  read(j, "nonlinearity", c.nonlinearity);
  read(j, "T", c.T);
  read(j, "nt", c.nt);
  read(j, "n_quad", c.n_quad);
  read(j, "tol", c.tol);
  read(j, "max_iter", c.max_iter);
  read(j, "s", c.s);
  read(j, "N_weight", c.N_weight);
  read(j, "cprime", c.cprime);
  read(j, "amplitude", c.amplitude);
  read(j, "output", c.output);
  read(j, "seed", c.seed);
  if (j.contains("ensemble")) {
    const auto& e = j["ensemble"];
    if (!e.is_object()) throw ValidationError("config key 'ensemble' must be an object");
    for (const auto& [key, _] : e.items())
      if (!kEnsembleKeys.count(key)) throw ValidationError("unknown config key 'ensemble." + key + "'");
    read(e, "family", c.ensemble.family);
    read(e, "count", c.ensemble.count);
    if (e.contains("seed")) {
      std::uint64_t s = 0;
      read(e, "seed", s);
      c.ensemble.seed = s;
    }
    read(e, "frequencies", c.ensemble.frequencies);
    read(e, "width", c.ensemble.width);
  }
  validate(c);
  return c;
}

RunConfig parse_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw ValidationError("config file not found: " + path);
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
  return parse_config_json(j);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json mu = nlohmann::json::array();
  for (const auto& m : c.mu) mu.push_back({m.real(), m.imag()});
  nlohmann::json ens = {{"family", c.ensemble.family},
                        {"count", c.ensemble.count},
                        {"frequencies", c.ensemble.frequencies},
                        {"width", c.ensemble.width}};
  if (c.ensemble.seed) ens["seed"] = *c.ensemble.seed;
  return {{"experiment", experiment_name(c.experiment)},
          {"n", c.n},
          {"N", c.N},
          {"L", c.L},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"k", c.k},
          {"sigma", c.sigma},
          {"mu", mu},
          {"sign", c.sign},
          {"b_kind", c.b_kind},
          {"nonlinearity", c.nonlinearity},
          {"T", c.T},
          {"nt", c.nt},
          {"n_quad", c.n_quad},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"s", c.s},
          {"N_weight", c.N_weight},
          {"cprime", c.cprime},
          {"amplitude", c.amplitude},
          {"ensemble", ens},
          {"output", c.output},
          {"seed", c.seed}};
}

std::uint64_t config_hash(const RunConfig& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace degen
