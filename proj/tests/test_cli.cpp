#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "degen/config.hpp"
#include "degen/error.hpp"
#include "degen/propagator.hpp"
#include "degen/runner.hpp"
#include "degen/trajectory.hpp"
#include "doctest.h"

using namespace degen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("degenlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json minimal(const std::string& experiment) {
  return {{"experiment", experiment}, {"n", 1}, {"N", 256}, {"L", 16.0}, {"alpha", 1.0}};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string message_of(const json& j) {
  try {
    parse_config_json(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config_json(minimal("evolve"));
  CHECK(c.experiment == Experiment::Evolve);
  CHECK(c.T == 1.0);
  CHECK(c.nt == 256);
  CHECK(c.n_quad == 64);
  CHECK(c.tol == 1e-10);
  CHECK(c.max_iter == 30);
  CHECK(c.sigma == 2.0);
  CHECK(c.beta == 2.0);
  CHECK(c.b_kind == "zero");
  CHECK(c.seed == 1);
  CHECK(c.ensemble.count == 10);
  CHECK(c.ensemble_seed() == 1);
}

TEST_CASE("each constraint has its own message") {
  auto j = minimal("evolve");
  j["sigma"] = 0.5;
  const auto sigma = message_of(j);
  CHECK(sigma.find("sigma must exceed 1") != std::string::npos);

  j = minimal("evolve");
  j["beta"] = 0.5;
  const auto beta = message_of(j);
  CHECK(beta.find("beta must be >= alpha") != std::string::npos);

  j = minimal("evolve");
  j["N"] = 100;
  const auto grid = message_of(j);
  CHECK(grid.find("power of two") != std::string::npos);

  j = minimal("evolve");
  j["colour"] = "blue";
  const auto unknown = message_of(j);
  CHECK(unknown.find("colour") != std::string::npos);

  j = minimal("evolve");
  j["ensemble"] = {{"size", 3}};
  CHECK(message_of(j).find("size") != std::string::npos);

  j = minimal("evolve");
  j.erase("alpha");
  CHECK(message_of(j).find("alpha") != std::string::npos);

  const std::set<std::string> distinct{sigma, beta, grid, unknown};
  CHECK(distinct.size() == 4);
}

TEST_CASE("missing file and malformed json are distinct") {
  const auto dir = scratch("parse");
  std::string missing, malformed;
  try {
    parse_config((dir / "absent.json").string());
  } catch (const ValidationError& e) {
    missing = e.what();
  }
  std::ofstream(dir / "bad.json") << "{\"experiment\": ";
  try {
    parse_config((dir / "bad.json").string());
  } catch (const ValidationError& e) {
    malformed = e.what();
  }
  CHECK(!missing.empty());
  CHECK(!malformed.empty());
  CHECK(missing != malformed);

  std::ofstream(dir / "ok.json") << minimal("picard").dump();
  CHECK(parse_config((dir / "ok.json").string()).experiment == Experiment::Picard);
}

TEST_CASE("emit then parse is the identity") {
  auto j = minimal("energy-check");
  j["b_kind"] = "decaying";
  j["mu"] = json::array({json::array({0.5, -0.25})});
  j["ensemble"] = {{"seed", 7}, {"family", "random_bandlimited"}};
  const auto c = parse_config_json(j);
  const auto back = parse_config_json(to_json(c));
  CHECK(back == c);
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(c.mu[0] == Complex(0.5, -0.25));

  const auto defaults = parse_config_json(minimal("evolve"));
  CHECK(parse_config_json(to_json(defaults)) == defaults);
  auto other = defaults;
  other.seed = 2;
  CHECK(config_hash(other) != config_hash(defaults));
}

TEST_CASE("identity-check on the default grid") {
  const auto dir = scratch("identity");
  auto c = parse_config_json(minimal("identity-check"));
  c.output = dir.string();
  const auto r = run(c);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["discrepancy"].get<double>() <= 1e-8);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["discrepancy"].get<double>() <= 1e-8);
  const auto manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["seed"] == 1);
  CHECK(parse_config_json(manifest["config"]) == c);
  CHECK(manifest.contains("config_hash"));
  CHECK(manifest.contains("timestamp"));
}

TEST_CASE("identical config and seed give a bit-identical csv") {
  auto c = parse_config_json(minimal("norm-equiv"));
  c.ensemble.family = "random_bandlimited";
  c.ensemble.count = 6;
  c.seed = 42;
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const auto dir = scratch("determinism" + std::to_string(i));
    c.output = dir.string();
    REQUIRE(run(c).exit_code == 0);
    csv[i] = slurp(dir / "report.csv");
  }
  CHECK(!csv[0].empty());
  CHECK(csv[0] == csv[1]);

  const auto dir = scratch("determinism_seed");
  c.output = dir.string();
  c.seed = 43;
  REQUIRE(run(c).exit_code == 0);
  CHECK(slurp(dir / "report.csv") != csv[0]);
}

TEST_CASE("supercritical picard exits nonzero with its history") {
  const auto dir = scratch("picard");
  auto j = minimal("picard");
  j["T"] = 4.0;
  j["amplitude"] = 5.0;
  j["nt"] = 64;
  auto c = parse_config_json(j);
  c.output = dir.string();
  const auto r = run(c);
  CHECK(r.exit_code == 4);
  const auto summary = json::parse(slurp(dir / "summary.json"));
  CHECK(summary["status"] == "failed");
  CHECK(summary["converged"] == false);
  CHECK(summary["distances"].size() >= 2);
  const auto csv = slurp(dir / "report.csv");
  CHECK(csv.find("picard,iter_1,") != std::string::npos);
}

TEST_CASE("validation failure exits 2 and flags the summary") {
  const auto dir = scratch("invalid");
  auto c = parse_config_json(minimal("evolve"));
  c.output = dir.string();
  c.sigma = 0.5;
  const auto r = run(c);
  CHECK(r.exit_code == 2);
  CHECK(json::parse(slurp(dir / "summary.json"))["status"] == "failed");
}

TEST_CASE("evolve with zero b matches the closed form") {
  const auto dir = scratch("evolve");
  auto j = minimal("evolve");
  j["nt"] = 32;
  j["alpha"] = 2.0;
  auto c = parse_config_json(j);
  c.output = dir.string();
  const auto r = run(c);
  REQUIRE(r.exit_code == 0);
  CHECK(r.summary["closed_form_error"].get<double>() <= 1e-12);
  const auto traj = load_trajectory((dir / "trajectory").string());
  REQUIRE(traj.size() == 33);
  const AlphaParams p(2.0);
  const auto& u0 = traj.snapshots.front();
  for (std::size_t n = 0; n < traj.size(); ++n)
    CHECK(max_abs_diff(traj.snapshots[n], w_alpha(u0, traj.times[n], 0.0, p)) <= 1e-12 * max_abs(u0));
}

TEST_CASE("exit code taxonomy") {
  CHECK(exit_code(ErrorKind::Validation) == 2);
  CHECK(exit_code(ErrorKind::Instability) == 3);
  CHECK(exit_code(ErrorKind::NonConvergence) == 4);
  CHECK(exit_code(ErrorKind::Divergence) == 5);
}
