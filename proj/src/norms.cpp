#include "degen/norms.hpp"

#include <cmath>

#include "degen/error.hpp"
#include "degen/parallel.hpp"

namespace degen {

std::vector<double> trapezoid_on(const std::vector<double>& times) {
  std::vector<double> w(times.size(), 0.0);
  for (std::size_t n = 0; n + 1 < times.size(); ++n) {
    const double h = times[n + 1] - times[n];
    w[n] += 0.5 * h;
    w[n + 1] += 0.5 * h;
  }
  return w;
}

std::vector<double> time_integrated_density(const Trajectory& traj,
                                            const std::function<Field(const Field&)>& op,
                                            const std::function<double(double)>& weight) {
  traj.validate();
  require(traj.size() >= 1, "empty trajectory");
  const auto w = trapezoid_on(traj.times);
  const std::size_t m = traj.grid().size();
  std::vector<Field> mapped(traj.size(), Field(traj.grid(), Space::Physical));
  parallel_for(traj.size(), [&](std::size_t n) {
    if (w[n] == 0.0 || weight(traj.times[n]) == 0.0) return;
    mapped[n] = as_physical(op(traj.snapshots[n]));
  });
  std::vector<double> density(m, 0.0);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    const double c = w[n] * weight(traj.times[n]);
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) density[i] += c * std::norm(mapped[n][i]);
  }
  return density;
}

std::vector<double> cube_integrals(const SpectralGrid& grid, const std::vector<double>& density,
                                   double cube_size) {
  require(cube_size > 0.0, "cube size must be positive");
  const double L = grid.half_length();
  const double per_axis = 2.0 * L / cube_size;
  require(std::abs(per_axis - std::round(per_axis)) < 1e-9, "cube size must divide 2L");
  const int cubes = static_cast<int>(std::round(per_axis));
  const double cells = static_cast<double>(grid.points()) / cubes;
  require(std::abs(cells - std::round(cells)) < 1e-9, "cube size must hold a whole number of cells");
  const int c = static_cast<int>(std::round(cells));
  const double vol = grid.cell_volume();
  std::vector<double> out(grid.dim() == 1 ? cubes : cubes * cubes, 0.0);
  for (std::size_t i = 0; i < density.size(); ++i) {
    const auto [a, b] = grid.unflatten(i);
    const std::size_t idx = grid.dim() == 1 ? static_cast<std::size_t>(a / c)
                                            : static_cast<std::size_t>(a / c) * cubes + b / c;
    out[idx] += density[i] * vol;
  }
  return out;
}

double sup_space_time(const SpectralGrid& grid, const std::vector<double>& density, double cube_size) {
  double m = 0.0;
  if (grid.dim() == 1) {
    for (double v : density) m = std::max(m, v);
  } else {
    for (double v : cube_integrals(grid, density, cube_size)) m = std::max(m, v);
  }
  return std::sqrt(m);
}

}  // namespace degen
