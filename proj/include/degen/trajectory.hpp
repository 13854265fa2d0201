#pragma once

#include <string>
#include <vector>

#include "degen/field.hpp"
#include "json.hpp"

namespace degen {

/// Time-stamped snapshots of one solve. All snapshots share a grid.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  double dt = 0.0;
  std::string scheme;
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const noexcept { return times.size(); }
  const SpectralGrid& grid() const;
  const Field& back() const { return snapshots.back(); }
  void push(double t, Field u);
  /// Throws unless times increase strictly and every snapshot shares one grid.
  void validate() const;
};

/// Writes snap_00000.dsf1, ... plus manifest.json into `dir` (created if needed).
void save_trajectory(const std::string& dir, const Trajectory& traj);
Trajectory load_trajectory(const std::string& dir);

}  // namespace degen
