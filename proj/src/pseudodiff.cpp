#include "degen/pseudodiff.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>

#include "degen/error.hpp"
#include "degen/parallel.hpp"

namespace degen {

namespace {

constexpr Complex kI{0.0, 1.0};

std::span<const double> head(const std::array<double, 2>& v, int dim) { return {v.data(), static_cast<std::size_t>(dim)}; }

void require_same_symbol_grid(const GridSymbol& a, const GridSymbol& b, const char* where) {
  if (!(a.grid == b.grid)) throw ValidationError(std::string(where) + ": symbol grid mismatch");
}

std::vector<Complex> tabulate(const SpectralGrid& g,
                              const std::function<Complex(std::span<const double>, std::span<const double>)>& f) {
  const std::size_t m = g.size();
  std::vector<Complex> out(m * m);
  parallel_for(m, [&](std::size_t i) {
    const auto x = g.position(i);
    for (std::size_t k = 0; k < m; ++k) {
      const auto xi = g.wavevector(k);
      out[i * m + k] = f(head(x, g.dim()), head(xi, g.dim()));
    }
  });
  return out;
}

}  // namespace

void GridSymbol::validate() const {
  require(values.size() == side() * side(), "symbol table has wrong size");
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw ValidationError("symbol is not finite on the lattice");
    if (real_valued && std::abs(v.imag()) > 1e-14)
      throw ValidationError("symbol declared real has an imaginary part");
  }
}

GridSymbol tabulate_symbol(const SpectralGrid& grid, const SymbolDefinition& def) {
  require(static_cast<bool>(def.value), "symbol definition has no value function");
  GridSymbol s{grid, tabulate(grid, def.value), def.order, def.real_valued, {}, {}, {}};
  auto per_axis = [&](const SymbolDerivative& d, std::vector<std::vector<Complex>>& dst) {
    if (!d) return;
    for (int j = 0; j < grid.dim(); ++j)
      dst.push_back(tabulate(grid, [&d, j](std::span<const double> x, std::span<const double> xi) {
        return d(x, xi, j);
      }));
  };
  per_axis(def.dx, s.dx);
  per_axis(def.dxi, s.dxi);
  per_axis(def.dxi2, s.dxi2);
  s.validate();
  return s;
}

GridSymbol constant_symbol(const SpectralGrid& grid, Complex c) {
  auto zero = [](std::span<const double>, std::span<const double>, int) { return Complex(0.0); };
  return tabulate_symbol(grid, {[c](auto, auto) { return c; }, zero, zero, zero, 0.0, c.imag() == 0.0});
}

GridSymbol multiplier_as_symbol(const SpectralGrid& grid, const MultiplierSymbol& m) {
  require(static_cast<bool>(m.evaluator), "multiplier has no evaluator");
  auto zero = [](std::span<const double>, std::span<const double>, int) { return Complex(0.0); };
  SymbolDefinition def;
  def.value = [&m](std::span<const double>, std::span<const double> xi) { return m.evaluator(xi); };
  def.dx = zero;
  def.order = m.order;
  return tabulate_symbol(grid, def);
}

GridSymbol potential_symbol(const SpectralGrid& grid,
                            const std::function<Complex(std::span<const double>)>& g) {
  auto zero = [](std::span<const double>, std::span<const double>, int) { return Complex(0.0); };
  SymbolDefinition def;
  def.value = [&g](std::span<const double> x, std::span<const double>) { return g(x); };
  def.dxi = zero;
  def.dxi2 = zero;
  return tabulate_symbol(grid, def);
}

GridSymbol frequency_symbol(const SpectralGrid& grid, int axis) {
  require(axis >= 0 && axis < grid.dim(), "frequency symbol axis out of range");
  auto zero = [](std::span<const double>, std::span<const double>, int) { return Complex(0.0); };
  return tabulate_symbol(
      grid, {[axis](auto, std::span<const double> xi) { return Complex(xi[axis]); }, zero,
             [axis](auto, auto, int j) { return Complex(j == axis ? 1.0 : 0.0); }, zero, 1.0, true});
}

GridSymbol xi_squared_symbol(const SpectralGrid& grid) {
  auto zero = [](std::span<const double>, std::span<const double>, int) { return Complex(0.0); };
  return tabulate_symbol(grid, {[](auto, std::span<const double> xi) {
                                  double r2 = 0;
                                  for (double v : xi) r2 += v * v;
                                  return Complex(r2);
                                },
                                zero,
                                [](auto, std::span<const double> xi, int j) { return Complex(2.0 * xi[j]); },
                                [](auto, auto, int) { return Complex(2.0); }, 2.0, true});
}

namespace {

struct Geometry {
  double xdotxi = 0.0, br = 1.0;  // x.xi, <xi>
};

Geometry geometry(std::span<const double> x, std::span<const double> xi) {
  Geometry g;
  double r2 = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    g.xdotxi += x[j] * xi[j];
    r2 += xi[j] * xi[j];
  }
  g.br = bracket(r2);
  return g;
}

double theta_dxi(const Geometry& g, std::span<const double> x, std::span<const double> xi, int j) {
  return x[j] / g.br - g.xdotxi * xi[j] / (g.br * g.br * g.br);
}

double theta_dxi2(const Geometry& g, std::span<const double> x, std::span<const double> xi, int j) {
  const double b3 = g.br * g.br * g.br;
  const double b5 = b3 * g.br * g.br;
  return -2.0 * x[j] * xi[j] / b3 + g.xdotxi * (-1.0 / b3 + 3.0 * xi[j] * xi[j] / b5);
}

}  // namespace

GridSymbol escape_direction_symbol(const SpectralGrid& grid) {
  SymbolDefinition def;
  def.value = [](std::span<const double> x, std::span<const double> xi) {
    const auto g = geometry(x, xi);
    return Complex(g.xdotxi / g.br);
  };
  def.dx = [](std::span<const double> x, std::span<const double> xi, int j) {
    return Complex(xi[j] / geometry(x, xi).br);
  };
  def.dxi = [](std::span<const double> x, std::span<const double> xi, int j) {
    return Complex(theta_dxi(geometry(x, xi), x, xi, j));
  };
  def.dxi2 = [](std::span<const double> x, std::span<const double> xi, int j) {
    return Complex(theta_dxi2(geometry(x, xi), x, xi, j));
  };
  def.real_valued = true;
  return tabulate_symbol(grid, def);
}

GridSymbol symbol_product(const GridSymbol& a, const GridSymbol& b) {
  require_same_symbol_grid(a, b, "symbol_product");
  GridSymbol out{a.grid, std::vector<Complex>(a.values.size()), a.order + b.order,
                 a.real_valued && b.real_valued, {}, {}, {}};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  const int dim = a.grid.dim();
  auto first = [&](const auto& da, const auto& db, auto& dst) {
    if (da.empty() || db.empty()) return;
    for (int j = 0; j < dim; ++j) {
      std::vector<Complex> t(out.values.size());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = da[j][i] * b.values[i] + a.values[i] * db[j][i];
      dst.push_back(std::move(t));
    }
  };
  first(a.dx, b.dx, out.dx);
  first(a.dxi, b.dxi, out.dxi);
  if (a.has_dxi() && b.has_dxi() && a.has_dxi2() && b.has_dxi2()) {
    for (int j = 0; j < dim; ++j) {
      std::vector<Complex> t(out.values.size());
      for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = a.dxi2[j][i] * b.values[i] + 2.0 * a.dxi[j][i] * b.dxi[j][i] + a.values[i] * b.dxi2[j][i];
      out.dxi2.push_back(std::move(t));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Numerical derivatives

std::vector<double> fd_first(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  require(n >= 5, "fourth-order differences need at least 5 samples");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
  const std::size_t e = n - 1;
  d[e] = -c * (-25.0 * f[e] + 48.0 * f[e - 1] - 36.0 * f[e - 2] + 16.0 * f[e - 3] - 3.0 * f[e - 4]);
  d[e - 1] = -c * (-3.0 * f[e] - 10.0 * f[e - 1] + 18.0 * f[e - 2] - 6.0 * f[e - 3] + f[e - 4]);
  return d;
}

std::vector<double> fd_second(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  require(n >= 6, "fourth-order second differences need at least 6 samples");
  std::vector<double> d(n);
  const double c = 1.0 / (12.0 * h * h);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = c * (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]);
  d[0] = c * (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]);
  d[1] = c * (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]);
  const std::size_t e = n - 1;
  d[e] = c * (45.0 * f[e] - 154.0 * f[e - 1] + 214.0 * f[e - 2] - 156.0 * f[e - 3] + 61.0 * f[e - 4] -
              10.0 * f[e - 5]);
  d[e - 1] = c * (10.0 * f[e] - 15.0 * f[e - 1] - 4.0 * f[e - 2] + 14.0 * f[e - 3] - 6.0 * f[e - 4] +
                  f[e - 5]);
  return d;
}

namespace {

// Differences along xi_axis, walking slots in increasing wavenumber order.
std::vector<Complex> fd_xi(const GridSymbol& a, int axis, int order) {
  const auto& g = a.grid;
  const int n = g.points();
  const std::size_t m = g.size();
  const double h = g.dxi();
  std::vector<Complex> out(m * m);
  const std::size_t lines = g.dim() == 1 ? 1 : static_cast<std::size_t>(n);
  parallel_for(m, [&](std::size_t i) {
    std::vector<double> re(n), im(n);
    std::vector<std::size_t> slots(n);
    for (std::size_t other = 0; other < lines; ++other) {
      for (int w = 0; w < n; ++w) {
        const int s = g.slot(w - n / 2);
        std::size_t k;
        if (g.dim() == 1) k = static_cast<std::size_t>(s);
        else k = axis == 0 ? g.flatten(s, static_cast<int>(other)) : g.flatten(static_cast<int>(other), s);
        slots[w] = k;
        re[w] = a.values[i * m + k].real();
        im[w] = a.values[i * m + k].imag();
      }
      const auto dr = order == 1 ? fd_first(re, h) : fd_second(re, h);
      const auto di = order == 1 ? fd_first(im, h) : fd_second(im, h);
      for (int w = 0; w < n; ++w) out[i * m + slots[w]] = {dr[w], di[w]};
    }
  });
  return out;
}

std::vector<Complex> spectral_dx(const GridSymbol& a, int axis) {
  const auto& g = a.grid;
  const std::size_t m = g.size();
  std::vector<Complex> out(m * m);
  parallel_for(m, [&](std::size_t k) {
    Field col(g, Space::Physical);
    for (std::size_t i = 0; i < m; ++i) col[i] = a.values[i * m + k];
    const Field d = partial_derivative(col, axis);
    for (std::size_t i = 0; i < m; ++i) out[i * m + k] = d[i];
  });
  return out;
}

void require_axis(const GridSymbol& a, int axis) {
  require(axis >= 0 && axis < a.grid.dim(), "derivative axis out of range");
}

}  // namespace

std::vector<Complex> symbol_dx(const GridSymbol& a, int axis, DerivativeMode mode) {
  require_axis(a, axis);
  if (mode == DerivativeMode::Auto && a.has_dx()) return a.dx[axis];
  return spectral_dx(a, axis);
}

std::vector<Complex> symbol_dxi(const GridSymbol& a, int axis, DerivativeMode mode) {
  require_axis(a, axis);
  if (mode == DerivativeMode::Auto && a.has_dxi()) return a.dxi[axis];
  return fd_xi(a, axis, 1);
}

std::vector<Complex> symbol_dxi2(const GridSymbol& a, int axis, DerivativeMode mode) {
  require_axis(a, axis);
  if (mode == DerivativeMode::Auto && a.has_dxi2()) return a.dxi2[axis];
  return fd_xi(a, axis, 2);
}

// ---------------------------------------------------------------------------
// Quantization

Field op_apply(const GridSymbol& a, const Field& u) {
  if (!(a.grid == u.grid())) throw ValidationError("op_apply: grid mismatch");
  const auto& g = a.grid;
  const int n = g.points();
  const std::size_t m = g.size();
  const Field hat = as_spectral(u);

  // e^{i x_i xi_k} per axis = (-1)^k e^{2 pi i i k / N}, with k the slot index.
  std::vector<Complex> phase(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double ang = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(i) * k) % n) / n;
      phase[static_cast<std::size_t>(i) * n + k] = ((k & 1) ? -1.0 : 1.0) * Complex(std::cos(ang), std::sin(ang));
    }

  Field out(g, Space::Physical);
  const double w = g.spectral_weight();
  parallel_for(m, [&](std::size_t i) {
    const auto [i0, i1] = g.unflatten(i);
    const Complex* row = a.values.data() + i * m;
    Complex acc = 0.0;
    if (g.dim() == 1) {
      const Complex* ph = phase.data() + static_cast<std::size_t>(i0) * n;
      for (std::size_t k = 0; k < m; ++k) acc += ph[k] * row[k] * hat[k];
    } else {
      const Complex* ph0 = phase.data() + static_cast<std::size_t>(i0) * n;
      const Complex* ph1 = phase.data() + static_cast<std::size_t>(i1) * n;
      for (int k0 = 0; k0 < n; ++k0) {
        Complex inner = 0.0;
        const std::size_t base = static_cast<std::size_t>(k0) * n;
        for (int k1 = 0; k1 < n; ++k1) inner += ph1[k1] * row[base + k1] * hat[base + k1];
        acc += ph0[k0] * inner;
      }
    }
    out[i] = w * acc;
  });
  return out;
}

GridSymbol poisson_bracket(const GridSymbol& a, const GridSymbol& b, DerivativeMode mode) {
  require_same_symbol_grid(a, b, "poisson_bracket");
  const std::size_t mm = a.values.size();
  GridSymbol out{a.grid, std::vector<Complex>(mm, 0.0), a.order + b.order - 1.0,
                 a.real_valued && b.real_valued, {}, {}, {}};
  for (int j = 0; j < a.grid.dim(); ++j) {
    const auto axi = symbol_dxi(a, j, mode);
    const auto bx = symbol_dx(b, j, mode);
    const auto ax = symbol_dx(a, j, mode);
    const auto bxi = symbol_dxi(b, j, mode);
    for (std::size_t i = 0; i < mm; ++i) out.values[i] += axi[i] * bx[i] - ax[i] * bxi[i];
  }
  if (out.real_valued)
    for (auto& v : out.values) v = v.real();
  return out;
}

GridSymbol commutator_leading(const GridSymbol& p1, const GridSymbol& p2, DerivativeMode mode) {
  GridSymbol out = poisson_bracket(p1, p2, mode);
  for (auto& v : out.values) v *= -kI;
  out.real_valued = false;
  return out;
}

// ---------------------------------------------------------------------------
// Escape function

void DoiParams::validate() const {
  require(sigma > 1.0, "sigma must exceed 1 (integrable weight)");
  require(cprime > 0.0, "C' must be positive");
  require(gain > 0.0, "escape gain must be positive");
  require(std::isfinite(sobolev_s), "sobolev order must be finite");
}

double doi_profile(double theta, double sigma) {
  if (theta == 0.0) return 0.0;
  if (sigma == 2.0) return std::atan(theta);
  const double z = theta * theta / (1.0 + theta * theta);
  const double v = 0.5 * boost::math::beta(0.5, 0.5 * (sigma - 1.0), z);
  return theta > 0 ? v : -v;
}

double doi_profile_d1(double theta, double sigma) { return std::pow(1.0 + theta * theta, -0.5 * sigma); }

double doi_profile_d2(double theta, double sigma) {
  return -sigma * theta * std::pow(1.0 + theta * theta, -0.5 * sigma - 1.0);
}

double doi_profile_total(double sigma) {
  require(sigma > 1.0, "sigma must exceed 1 (integrable weight)");
  return boost::math::beta(0.5, 0.5 * (sigma - 1.0));
}

double doi_phase_bound(const DoiParams& d) {
  d.validate();
  return 0.5 * d.cprime * d.gain * 0.5 * doi_profile_total(d.sigma);
}

GridSymbol doi_phase(const DoiParams& d, const SpectralGrid& grid) {
  d.validate();
  const double amp = 0.5 * d.cprime * d.gain;
  const double sigma = d.sigma;
  SymbolDefinition def;
  def.value = [=](std::span<const double> x, std::span<const double> xi) {
    const auto g = geometry(x, xi);
    return Complex(amp * doi_profile(g.xdotxi / g.br, sigma));
  };
  def.dx = [=](std::span<const double> x, std::span<const double> xi, int j) {
    const auto g = geometry(x, xi);
    return Complex(amp * doi_profile_d1(g.xdotxi / g.br, sigma) * xi[j] / g.br);
  };
  def.dxi = [=](std::span<const double> x, std::span<const double> xi, int j) {
    const auto g = geometry(x, xi);
    return Complex(amp * doi_profile_d1(g.xdotxi / g.br, sigma) * theta_dxi(g, x, xi, j));
  };
  def.dxi2 = [=](std::span<const double> x, std::span<const double> xi, int j) {
    const auto g = geometry(x, xi);
    const double th = g.xdotxi / g.br;
    const double t1 = theta_dxi(g, x, xi, j);
    return Complex(amp * (doi_profile_d2(th, sigma) * t1 * t1 +
                          doi_profile_d1(th, sigma) * theta_dxi2(g, x, xi, j)));
  };
  def.order = 0.0;
  def.real_valued = true;
  return tabulate_symbol(grid, def);
}

double garding_defect(const GridSymbol& p, const DoiParams& d, const GardingOptions& opts) {
  d.validate();
  const auto& g = p.grid;
  const std::size_t m = g.size();
  std::vector<std::vector<Complex>> grad;
  for (int j = 0; j < g.dim(); ++j) grad.push_back(symbol_dx(p, j, opts.mode));
  const WeightFunction lambda(d.sigma, WeightDirection::Decay);
  std::vector<double> row_max(m, 0.0);
  parallel_for(m, [&](std::size_t i) {
    const auto x = g.position(i);
    const double r2x = x[0] * x[0] + x[1] * x[1];
    const double lam = opts.weight ? opts.weight(r2x) : lambda(r2x);
    double best = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const auto xi = g.wavevector(k);
      const double r = std::hypot(xi[0], xi[1]);
      if (opts.restrict_region && (r < 1.0 || x[0] * xi[0] + x[1] * xi[1] < 0.0)) continue;
      double transport = 0.0;
      for (int j = 0; j < g.dim(); ++j) transport += 2.0 * xi[j] * grad[j][i * m + k].real();
      best = std::max(best, d.cprime * lam * r - transport);
    }
    row_max[i] = best;
  });
  double out = 0.0;
  for (double v : row_max) out = std::max(out, v);
  return out;
}

GridSymbol build_K_from_phase(const GridSymbol& p, double s) {
  const auto& g = p.grid;
  const std::size_t m = g.size();
  GridSymbol K{g, std::vector<Complex>(m * m), s, p.real_valued, {}, {}, {}};
  std::vector<double> lifts(m), rad(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto xi = g.wavevector(k);
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    lifts[k] = std::pow(1.0 + r2, 0.5 * s);
    rad[k] = 1.0 + r2;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) K.values[i * m + k] = std::exp(p.values[i * m + k]) * lifts[k];
  if (p.has_dx())
    for (int j = 0; j < g.dim(); ++j) {
      std::vector<Complex> t(m * m);
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = K.values[i] * p.dx[j][i];
      K.dx.push_back(std::move(t));
    }
  if (p.has_dxi())
    for (int j = 0; j < g.dim(); ++j) {
      std::vector<Complex> t(m * m);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          const double xj = g.wavevector(k)[j];
          t[i * m + k] = K.values[i * m + k] * (p.dxi[j][i * m + k] + s * xj / rad[k]);
        }
      K.dxi.push_back(std::move(t));
    }
  return K;
}

GridSymbol build_K(const DoiParams& d, const SpectralGrid& grid) {
  return build_K_from_phase(doi_phase(d, grid), d.sobolev_s);
}

double n_norm(const Field& u, const GridSymbol& K, double s) {
  const double a = l2_norm(op_apply(K, u));
  const double b = sobolev_norm(u, s - 1.0);
  return std::sqrt(a * a + b * b);
}

double n_norm(const Field& u, const DoiParams& d) { return n_norm(u, build_K(d, u.grid()), d.sobolev_s); }

// ---------------------------------------------------------------------------
// Weight commutation

double weight_commutation_identity(const GridSymbol& p, const Field& u, DerivativeMode mode) {
  if (!(p.grid == u.grid())) throw ValidationError("weight_commutation_identity: grid mismatch");
  const auto& g = p.grid;
  const Field up = as_physical(u);
  Field weighted = up;
  for (std::size_t i = 0; i < up.size(); ++i) {
    const auto x = g.position(i);
    weighted[i] *= 1.0 + x[0] * x[0] + x[1] * x[1];
  }
  Field r = op_apply(p, up);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto x = g.position(i);
    r[i] *= 1.0 + x[0] * x[0] + x[1] * x[1];
  }
  r -= op_apply(p, weighted);
  for (int j = 0; j < g.dim(); ++j) {
    GridSymbol d1{g, symbol_dxi(p, j, mode), p.order, false, {}, {}, {}};
    for (auto& v : d1.values) v *= kI;
    Field xu = up;
    for (std::size_t i = 0; i < xu.size(); ++i) xu[i] *= g.position(i)[j];
    axpy(-2.0, op_apply(d1, xu), r);
    GridSymbol d2{g, symbol_dxi2(p, j, mode), p.order, false, {}, {}, {}};
    r += op_apply(d2, up);
  }
  return l2_norm(r);
}

}  // namespace degen
