#pragma once

#include <cmath>
#include <random>

#include "degen/field.hpp"
#include "degen/spectral.hpp"

namespace testing_support {

using degen::Complex;

// Random coefficients on |k_j| < cutoff, returned in physical space.
inline degen::Field random_bandlimited(const degen::SpectralGrid& g, std::mt19937_64& rng,
                                       int cutoff = -1) {
  if (cutoff < 0) cutoff = g.points() / 4;
  std::normal_distribution<double> nd;
  degen::Field hat(g, degen::Space::Spectral);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto k = g.wavenumbers(i);
    if (std::abs(k[0]) < cutoff && std::abs(k[1]) < cutoff) hat[i] = {nd(rng), nd(rng)};
  }
  return degen::to_physical(hat);
}

inline degen::Field plane_wave(const degen::SpectralGrid& g, int k0, int k1 = 0) {
  const double a = g.dxi() * k0, b = g.dxi() * k1;
  return degen::Field::sample(g, [a, b](double x, double y) {
    return std::exp(Complex(0.0, a * x + b * y));
  });
}

inline degen::Field gaussian(const degen::SpectralGrid& g, double width, double carrier = 0.0,
                             double x0 = 0.0) {
  return degen::Field::sample(g, [=](double x, double y) {
    const double r2 = (x - x0) * (x - x0) + y * y;
    return std::exp(-r2 / (2.0 * width * width)) * std::exp(Complex(0.0, carrier * x));
  });
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing_support
