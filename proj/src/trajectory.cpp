#include "degen/trajectory.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "degen/error.hpp"

namespace degen {

const SpectralGrid& Trajectory::grid() const {
  require(!snapshots.empty(), "trajectory is empty");
  return snapshots.front().grid();
}

void Trajectory::push(double t, Field u) {
  if (!times.empty()) {
    require(t > times.back(), "trajectory times must increase");
    require_same_grid(snapshots.front(), u, "trajectory");
  }
  times.push_back(t);
  snapshots.push_back(std::move(u));
}

void Trajectory::validate() const {
  require(times.size() == snapshots.size(), "trajectory has mismatched times and snapshots");
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] > times[i - 1], "trajectory times must increase");
    require_same_grid(snapshots[0], snapshots[i], "trajectory");
  }
}

namespace {
std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%05zu.dsf1", i);
  return buf;
}
}  // namespace

void save_trajectory(const std::string& dir, const Trajectory& traj) {
  traj.validate();
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto name = snapshot_name(i);
    save_dsf1((fs::path(dir) / name).string(), traj.snapshots[i]);
    files.push_back(name);
  }
  nlohmann::json manifest = {
      {"times", traj.times}, {"dt", traj.dt},         {"scheme", traj.scheme},
      {"files", files},      {"metadata", traj.metadata},
  };
  std::ofstream os(fs::path(dir) / "manifest.json");
  if (!os) throw ValidationError("cannot write trajectory manifest in " + dir);
  os << manifest.dump(2) << '\n';
}

Trajectory load_trajectory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream is(fs::path(dir) / "manifest.json");
  if (!is) throw ValidationError("missing trajectory manifest in " + dir);
  nlohmann::json manifest;
  try {
    is >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed trajectory manifest: ") + e.what());
  }
  Trajectory traj;
  traj.dt = manifest.at("dt").get<double>();
  traj.scheme = manifest.at("scheme").get<std::string>();
  traj.metadata = manifest.value("metadata", nlohmann::json::object());
  const auto times = manifest.at("times").get<std::vector<double>>();
  const auto files = manifest.at("files").get<std::vector<std::string>>();
  require(times.size() == files.size(), "trajectory manifest lists mismatched files");
  for (std::size_t i = 0; i < times.size(); ++i)
    traj.push(times[i], load_dsf1((fs::path(dir) / files[i]).string()));
  return traj;
}

}  // namespace degen
