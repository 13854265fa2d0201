#pragma once

#include <functional>
#include <vector>

#include "degen/field.hpp"
#include "degen/trajectory.hpp"

namespace degen {

/// Trapezoid weights for arbitrary increasing sample times.
std::vector<double> trapezoid_on(const std::vector<double>& times);

/// Per-node integral over time of weight(t) |op(u(t))(x_i)|^2 (trapezoid).
std::vector<double> time_integrated_density(const Trajectory& traj,
                                            const std::function<Field(const Field&)>& op,
                                            const std::function<double(double)>& weight);

/// Sums density * dx^n over cubes of side `cube_size`, by node. Throws unless
/// the side divides 2L into a whole number of cubes, each holding whole cells.
std::vector<double> cube_integrals(const SpectralGrid& grid, const std::vector<double>& density,
                                   double cube_size);

/// sqrt of the largest node value (n = 1) or largest cube integral (n = 2,
/// unit cubes).
double sup_space_time(const SpectralGrid& grid, const std::vector<double>& density, double cube_size = 1.0);

}  // namespace degen
