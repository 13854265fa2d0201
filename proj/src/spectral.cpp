#include "degen/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "degen/error.hpp"

namespace degen {

std::vector<Complex> sample_multiplier(const SpectralGrid& grid, const MultiplierSymbol& m) {
  require(static_cast<bool>(m.evaluator), "multiplier has no evaluator");
  std::vector<Complex> table(grid.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto xi = grid.wavevector(i);
    const Complex v = m.evaluator(std::span<const double>(xi.data(), grid.dim()));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("multiplier is not finite on the lattice");
    table[i] = v;
  }
  return table;
}

Field apply_multiplier(const Field& u, std::span<const Complex> table) {
  require(table.size() == u.size(), "multiplier table size does not match grid");
  Field hat = as_spectral(u);
  for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= table[i];
  return u.is_physical() ? to_physical(hat) : hat;
}

Field apply_multiplier(const Field& u, const MultiplierSymbol& m) {
  const auto table = sample_multiplier(u.grid(), m);
  return apply_multiplier(u, table);
}

namespace {

template <class F>
Field apply_radial(const Field& u, F&& f) {
  const auto& g = u.grid();
  Field hat = as_spectral(u);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto xi = g.wavevector(i);
    hat[i] *= f(xi);
  }
  return u.is_physical() ? to_physical(hat) : hat;
}

double sq(const std::array<double, 2>& xi) { return xi[0] * xi[0] + xi[1] * xi[1]; }

}  // namespace

Field fractional_derivative(const Field& u, double gamma) {
  require(gamma >= 0.0, "fractional derivative order must be non-negative");
  return apply_radial(u, [gamma](const std::array<double, 2>& xi) -> Complex {
    const double r = std::sqrt(sq(xi));
    if (gamma == 0.0) return 1.0;
    return r == 0.0 ? 0.0 : std::pow(r, gamma);
  });
}

Field bessel_potential(const Field& u, double s) {
  return apply_radial(u, [s](const std::array<double, 2>& xi) -> Complex {
    return std::pow(bracket(sq(xi)), s);
  });
}

Field partial_derivative(const Field& u, int axis) {
  require(axis >= 0 && axis < u.grid().dim(), "derivative axis out of range");
  return apply_radial(u, [axis](const std::array<double, 2>& xi) -> Complex {
    return {0.0, xi[axis]};
  });
}

Field divergence_derivative(const Field& u) {
  return apply_radial(u, [](const std::array<double, 2>& xi) -> Complex {
    return {0.0, xi[0] + xi[1]};
  });
}

Field laplacian(const Field& u) {
  return apply_radial(u, [](const std::array<double, 2>& xi) -> Complex { return -sq(xi); });
}

double sobolev_norm(const Field& u, double s) {
  const Field hat = as_spectral(u);
  const auto& g = hat.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i)
    acc += std::pow(1.0 + sq(g.wavevector(i)), s) * std::norm(hat[i]);
  return std::sqrt(g.spectral_weight() * acc);
}

double homogeneous_sobolev_norm(const Field& u, double s) {
  const Field hat = as_spectral(u);
  const auto& g = hat.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const double r2 = sq(g.wavevector(i));
    if (s == 0.0) {
      acc += std::norm(hat[i]);
    } else if (r2 > 0.0) {
      acc += std::pow(r2, s) * std::norm(hat[i]);
    }
  }
  return std::sqrt(g.spectral_weight() * acc);
}

namespace {

template <class Keep>
Field filter_modes(const Field& u, Keep&& keep) {
  const auto& g = u.grid();
  Field hat = as_spectral(u);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto k = g.wavenumbers(i);
    if (!keep(std::max(std::abs(k[0]), std::abs(k[1])))) hat[i] = 0.0;
  }
  return u.is_physical() ? to_physical(hat) : hat;
}

}  // namespace

Field truncate_modes(const Field& u, int cutoff) {
  return filter_modes(u, [cutoff](int k) { return k < cutoff; });
}

Field band_limit(const Field& u) { return truncate_modes(u, u.grid().points() / 4); }

Field dealias(const Field& u) {
  const int n = u.grid().points();
  return filter_modes(u, [n](int k) { return 3 * k <= n; });
}

double high_mode_fraction(const Field& u) {
  const auto& g = u.grid();
  const Field hat = as_spectral(u);
  const int cut = g.points() / 4;
  double hi = 0.0, total = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto k = g.wavenumbers(i);
    const double e = std::norm(hat[i]);
    total += e;
    if (std::max(std::abs(k[0]), std::abs(k[1])) >= cut) hi += e;
  }
  return total == 0.0 ? 0.0 : std::sqrt(hi / total);
}

}  // namespace degen
