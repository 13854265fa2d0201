#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degen/field.hpp"

namespace degen {

enum class EnsembleFamily { Gaussian, ModulatedGaussian, RandomBandlimited };

EnsembleFamily parse_family(const std::string& name);
std::string family_name(EnsembleFamily f);

/// Reproducible family of localized, band-limited data with unit L2 norm.
/// Members are closed-form packets, so the same seed gives the same
/// functions on every grid.
struct EnsembleSpec {
  EnsembleFamily family = EnsembleFamily::Gaussian;
  int count = 10;
  std::uint64_t seed = 1;
  /// Carriers for the modulated family (cycled through the members).
  std::vector<double> frequencies{};
  /// Nominal packet width; members draw widths in [0.8, 1.2] x width.
  double width = 1.0;
  /// Centers are drawn from [-spread, spread] on every axis.
  double spread = 0.5;
};

/// Builds the members on `grid` and enforces the band and boundary contracts:
/// relative mass above N/4 and boundary ratio both below `tolerance`.
std::vector<Field> make_ensemble(const EnsembleSpec& spec, const SpectralGrid& grid,
                                 double tolerance = 1e-10);

/// Checks the band and boundary contracts for a single field.
void require_resolved(const Field& u, const std::string& what, double tolerance = 1e-10);

/// Unit-norm Gaussian packet exp(-|x-x0|^2/(2w^2) + i xi0 . x).
Field gaussian_packet(const SpectralGrid& grid, double width, std::span<const double> center,
                      std::span<const double> carrier);

}  // namespace degen
