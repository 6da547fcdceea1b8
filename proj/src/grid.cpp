#include "diracbs/grid.hpp"

#include <cmath>
#include <fstream>

#include "binary_io.hpp"

namespace diracbs {

namespace {
constexpr char kFieldMagic[8] = {'D', 'B', 'S', 'F', 'L', 'D', '0', '1'};
}

void GridSpec::validate() const {
  if (n < 1 || n > 8) throw ValidationError("grid dimension must be in 1..8, got " + std::to_string(n));
  if (M < 2 || M % 2 != 0) throw ValidationError("samples per axis M must be even and >= 2, got " + std::to_string(M));
  if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("half box length L must be positive");
  if (N < 1) throw ValidationError("component count N must be >= 1");
}

double GridSpec::cell_volume() const { return std::pow(spacing(), n); }

std::size_t GridSpec::points() const {
  std::size_t p = 1;
  for (int a = 0; a < n; ++a) p *= static_cast<std::size_t>(M);
  return p;
}

double GridSpec::frequency(int k) const {
  const int signed_k = k < M / 2 ? k : k - M;
  return M_PI / L * signed_k;
}

std::array<int, 8> GridSpec::unravel(std::size_t p) const {
  std::array<int, 8> idx{};
  for (int a = n - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(p % static_cast<std::size_t>(M));
    p /= static_cast<std::size_t>(M);
  }
  return idx;
}

void GridSpec::position(std::size_t p, std::span<double> x) const {
  const auto idx = unravel(p);
  for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = coordinate(idx[static_cast<std::size_t>(a)]);
}

double GridSpec::radius(std::size_t p) const {
  const auto idx = unravel(p);
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) {
    const double c = coordinate(idx[static_cast<std::size_t>(a)]);
    r2 += c * c;
  }
  return std::sqrt(r2);
}

void GridSpec::wavevector(std::size_t p, std::span<double> xi) const {
  const auto idx = unravel(p);
  for (int a = 0; a < n; ++a) xi[static_cast<std::size_t>(a)] = frequency(idx[static_cast<std::size_t>(a)]);
}

double GridSpec::wavevector_norm2(std::size_t p) const {
  const auto idx = unravel(p);
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    const double f = frequency(idx[static_cast<std::size_t>(a)]);
    s += f * f;
  }
  return s;
}

double FieldOnGrid::pointwise_norm2(std::size_t p) const {
  double s = 0.0;
  for (int c = 0; c < grid.N; ++c) s += std::norm(at(p, c));
  return s;
}

double FieldOnGrid::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.cell_volume());
}

void write_field(const FieldOnGrid& field, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  os.write(kFieldMagic, sizeof kFieldMagic);
  detail::put<std::uint8_t>(os, 1);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.n));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.M));
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(field.grid.N));
  detail::put<double>(os, field.grid.L);
  for (const auto& v : field.values) detail::put_complex(os, v);
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

FieldOnGrid read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kFieldMagic, sizeof magic) != 0)
    throw ValidationError("'" + path.string() + "' is not a field snapshot");
  if (detail::get<std::uint8_t>(is) != 1) throw ValidationError("unsupported endianness flag");
  GridSpec g;
  g.n = static_cast<int>(detail::get<std::uint32_t>(is));
  g.M = static_cast<int>(detail::get<std::uint32_t>(is));
  g.N = static_cast<int>(detail::get<std::uint32_t>(is));
  g.L = detail::get<double>(is);
  g.validate();
  FieldOnGrid f(g);
  for (auto& v : f.values) v = detail::get_complex(is);
  return f;
}

} // namespace diracbs
