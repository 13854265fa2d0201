#include "degen/field.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "degen/error.hpp"
#include "fft.hpp"

namespace degen {

SpectralGrid SpectralGrid::create(int dim, int points, double half_length) {
  require(dim == 1 || dim == 2, "grid dimension must be 1 or 2, got " + std::to_string(dim));
  require(points >= 8 && std::has_single_bit(static_cast<unsigned>(points)),
          "points per axis must be a power of two >= 8, got " + std::to_string(points));
  require(half_length > 0.0 && std::isfinite(half_length), "half length L must be positive");
  return SpectralGrid(dim, points, half_length);
}

SpectralGrid create_grid(int dim, int points, double half_length) {
  return SpectralGrid::create(dim, points, half_length);
}

Field::Field(const SpectralGrid& grid, Space space)
    : grid_(grid), values_(grid.size()), space_(space) {}

Field::Field(const SpectralGrid& grid, std::vector<Complex> values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  require(values_.size() == grid_.size(), "field size does not match grid");
}

Field Field::sample(const SpectralGrid& grid, const std::function<Complex(double, double)>& f) {
  Field out(grid, Space::Physical);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto x = grid.position(i);
    out.values_[i] = f(x[0], x[1]);
  }
  return out;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid() == b.grid())) throw ValidationError(std::string(where) + ": grid mismatch");
}

Field& Field::operator+=(const Field& other) {
  axpy(1.0, other, *this);
  return *this;
}

Field& Field::operator-=(const Field& other) {
  axpy(-1.0, other, *this);
  return *this;
}

Field& Field::operator*=(Complex scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex s, Field a) { return a *= s; }

void axpy(Complex s, const Field& b, Field& a) {
  require_same_grid(a, b, "axpy");
  require(a.space() == b.space(), "axpy: space tag mismatch");
  auto dst = a.mutable_values();
  auto src = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
}

namespace {

// (-1)^{m_0 + m_1}: the phase e^{i L xi} picked up by starting the box at -L.
double checkerboard(const SpectralGrid& g, std::size_t idx) {
  const auto [a, b] = g.unflatten(idx);
  return ((a + b) & 1) ? -1.0 : 1.0;
}

}  // namespace

Field to_spectral(const Field& u) {
  require(u.is_physical(), "to_spectral: input is already spectral");
  const auto& g = u.grid();
  std::vector<Complex> data(u.values().begin(), u.values().end());
  detail::fft_inplace(g, data, -1);
  const double vol = g.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= vol * checkerboard(g, i);
  return Field(g, std::move(data), Space::Spectral);
}

Field to_physical(const Field& u) {
  require(u.is_spectral(), "to_physical: input is already physical");
  const auto& g = u.grid();
  std::vector<Complex> data(u.values().begin(), u.values().end());
  const double w = g.spectral_weight();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= w * checkerboard(g, i);
  detail::fft_inplace(g, data, +1);
  return Field(g, std::move(data), Space::Physical);
}

Field as_spectral(const Field& u) { return u.is_spectral() ? u : to_spectral(u); }
Field as_physical(const Field& u) { return u.is_physical() ? u : to_physical(u); }

Field dense_dft(const Field& u) {
  require(u.is_physical(), "dense_dft: input must be physical");
  const auto& g = u.grid();
  Field out(g, Space::Spectral);
  const double vol = g.cell_volume();
  for (std::size_t m = 0; m < g.size(); ++m) {
    const auto xi = g.wavevector(m);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto x = g.position(j);
      const double phase = -(x[0] * xi[0] + x[1] * xi[1]);
      acc += u[j] * Complex(std::cos(phase), std::sin(phase));
    }
    out[m] = vol * acc;
  }
  return out;
}

double l2_norm(const Field& u) {
  double acc = 0.0;
  for (const auto& v : u.values()) acc += std::norm(v);
  const double w = u.is_physical() ? u.grid().cell_volume() : u.grid().spectral_weight();
  return std::sqrt(w * acc);
}

Complex inner(const Field& u, const Field& v) {
  require_same_grid(u, v, "inner");
  const Field a = as_physical(u);
  const Field b = as_physical(v);
  Complex acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return acc * a.grid().cell_volume();
}

double max_abs(const Field& u) {
  double m = 0.0;
  for (const auto& v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Field& u, const Field& v) {
  require_same_grid(u, v, "max_abs_diff");
  const Field w = u.is_physical() ? as_physical(v) : as_spectral(v);
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - w[i]));
  return m;
}

double boundary_ratio(const Field& u) {
  const Field p = as_physical(u);
  const auto& g = p.grid();
  const double peak = max_abs(p);
  if (peak == 0.0) return 0.0;
  const int n = g.points();
  double edge = 0.0;
  if (g.dim() == 1) {
    edge = std::max(std::abs(p[0]), std::abs(p[n - 1]));
  } else {
    for (int i = 0; i < n; ++i) {
      edge = std::max({edge, std::abs(p[g.flatten(0, i)]), std::abs(p[g.flatten(n - 1, i)]),
                       std::abs(p[g.flatten(i, 0)]), std::abs(p[g.flatten(i, n - 1)])});
    }
  }
  return edge / peak;
}

// ---------------------------------------------------------------------------
// DSF1

namespace {

constexpr char kMagic[4] = {'D', 'S', 'F', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFFu);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFFu);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void get_bytes(std::istream& is, unsigned char* b, int n) {
  is.read(reinterpret_cast<char*>(b), n);
  if (is.gcount() != n) throw ValidationError("DSF1: truncated stream");
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  get_bytes(is, b, 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  get_bytes(is, b, 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

void write_dsf1(std::ostream& os, const Field& u) {
  const auto& g = u.grid();
  os.write(kMagic, 4);
  put_u32(os, static_cast<std::uint32_t>(g.dim()));
  put_u32(os, static_cast<std::uint32_t>(g.points()));
  put_f64(os, g.half_length());
  const char tag = u.is_physical() ? 0 : 1;
  os.write(&tag, 1);
  for (const auto& v : u.values()) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
}

Field read_dsf1(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (is.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) throw ValidationError("DSF1: bad magic");
  const auto dim = static_cast<int>(get_u32(is));
  const auto points = static_cast<int>(get_u32(is));
  const double half_length = get_f64(is);
  const auto grid = create_grid(dim, points, half_length);
  unsigned char tag;
  get_bytes(is, &tag, 1);
  if (tag > 1) throw ValidationError("DSF1: bad space tag");
  std::vector<Complex> values(grid.size());
  for (auto& v : values) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    v = {re, im};
  }
  return Field(grid, std::move(values), tag == 0 ? Space::Physical : Space::Spectral);
}

void save_dsf1(const std::string& path, const Field& u) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  write_dsf1(os, u);
}

Field load_dsf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + path);
  return read_dsf1(is);
}

}  // namespace degen
