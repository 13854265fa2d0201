#include "degen/ensemble.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "degen/error.hpp"
#include "degen/spectral.hpp"

namespace degen {

EnsembleFamily parse_family(const std::string& name) {
  if (name == "gaussian") return EnsembleFamily::Gaussian;
  if (name == "modulated_gaussian") return EnsembleFamily::ModulatedGaussian;
  if (name == "random_bandlimited") return EnsembleFamily::RandomBandlimited;
  throw ValidationError("unknown ensemble family '" + name + "'");
}

std::string family_name(EnsembleFamily f) {
  switch (f) {
    case EnsembleFamily::Gaussian: return "gaussian";
    case EnsembleFamily::ModulatedGaussian: return "modulated_gaussian";
    case EnsembleFamily::RandomBandlimited: return "random_bandlimited";
  }
  return "gaussian";
}

Field gaussian_packet(const SpectralGrid& grid, double width, std::span<const double> center,
                      std::span<const double> carrier) {
  const int dim = grid.dim();
  Field u(grid, Space::Physical);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = grid.position(i);
    double r2 = 0.0, ph = 0.0;
    for (int j = 0; j < dim; ++j) {
      const double dxj = x[j] - center[j];
      r2 += dxj * dxj;
      ph += carrier[j] * x[j];
    }
    u[i] = std::exp(-r2 / (2.0 * width * width)) * Complex(std::cos(ph), std::sin(ph));
  }
  return Complex(1.0 / l2_norm(u)) * u;
}

void require_resolved(const Field& u, const std::string& what, double tolerance) {
  const double band = high_mode_fraction(u);
  char buf[32];
  if (!(band <= tolerance)) {
    std::snprintf(buf, sizeof buf, "%.3g", band);
    throw ValidationError(what + " carries spectral mass above N/4 (relative " + buf + ")");
  }
  const double edge = boundary_ratio(u);
  if (!(edge <= tolerance)) {
    std::snprintf(buf, sizeof buf, "%.3g", edge);
    throw ValidationError(what + " is not negligible at the box boundary (ratio " + buf + ")");
  }
}

std::vector<Field> make_ensemble(const EnsembleSpec& spec, const SpectralGrid& grid, double tolerance) {
  require(spec.count >= 1, "ensemble count must be positive");
  require(spec.width > 0.0, "ensemble width must be positive");
  if (spec.family == EnsembleFamily::ModulatedGaussian)
    require(!spec.frequencies.empty(), "modulated ensemble needs at least one carrier frequency");
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int dim = grid.dim();
  // Carriers stay well inside the band so the Gaussian tail is negligible at N/4.
  const double band = 0.25 * grid.xi_max();
  std::vector<Field> members;
  members.reserve(spec.count);
  for (int m = 0; m < spec.count; ++m) {
    std::array<double, 2> center{}, carrier{};
    for (int j = 0; j < dim; ++j) center[j] = spec.spread * unit(rng);
    const double width = spec.width * (1.0 + 0.2 * unit(rng));
    Field u(grid, Space::Physical);
    switch (spec.family) {
      case EnsembleFamily::Gaussian:
        for (int j = 0; j < dim; ++j) carrier[j] = 0.5 * unit(rng);
        u = gaussian_packet(grid, width, {center.data(), 2}, {carrier.data(), 2});
        break;
      case EnsembleFamily::ModulatedGaussian: {
        carrier[0] = spec.frequencies[m % spec.frequencies.size()];
        u = gaussian_packet(grid, width, {center.data(), 2}, {carrier.data(), 2});
        break;
      }
      case EnsembleFamily::RandomBandlimited: {
        // A few packets with random carriers inside half the band.
        u = Field(grid, Space::Physical);
        for (int q = 0; q < 3; ++q) {
          std::array<double, 2> c{}, k{};
          for (int j = 0; j < dim; ++j) {
            c[j] = spec.spread * unit(rng);
            k[j] = 0.5 * band * unit(rng);
          }
          const Complex amp(unit(rng), unit(rng));
          axpy(amp, gaussian_packet(grid, width, {c.data(), 2}, {k.data(), 2}), u);
        }
        u *= 1.0 / l2_norm(u);
        break;
      }
    }
    require_resolved(u, "ensemble member " + std::to_string(m), tolerance);
    members.push_back(std::move(u));
  }
  return members;
}

}  // namespace degen
