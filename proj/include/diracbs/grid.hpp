#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// Periodic box [-L, L)^n sampled with M points per axis at half-cell
/// offsets x_i = -L + (i + 1/2) h, h = 2L/M, so no sample sits at x = 0.
/// Frequencies are xi = (pi/L) k with k in {-M/2, ..., M/2 - 1} per axis.
struct GridSpec {
  int n = 3;
  double L = 8.0;
  int M = 8;
  int N = 1;  // components per point

  void validate() const;

  double spacing() const { return 2.0 * L / M; }
  double cell_volume() const;
  std::size_t points() const;
  std::size_t dof() const { return points() * static_cast<std::size_t>(N); }

  /// Coordinate of sample index i along one axis.
  double coordinate(int i) const { return -L + (i + 0.5) * spacing(); }
  /// Signed frequency of FFT index k along one axis.
  double frequency(int k) const;

  /// Multi-index of flat point index p (axis 0 slowest).
  std::array<int, 8> unravel(std::size_t p) const;
  void position(std::size_t p, std::span<double> x) const;
  double radius(std::size_t p) const;
  void wavevector(std::size_t p, std::span<double> xi) const;
  double wavevector_norm2(std::size_t p) const;

  bool operator==(const GridSpec&) const = default;
};

/// Complex field with N components per sample, point-major layout
/// values[p * N + c].
struct FieldOnGrid {
  GridSpec grid;
  std::vector<cplx> values;

  FieldOnGrid() = default;
  explicit FieldOnGrid(const GridSpec& g) : grid(g), values(g.dof(), cplx{0.0, 0.0}) {}

  cplx& at(std::size_t p, int c) { return values[p * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(c)]; }
  const cplx& at(std::size_t p, int c) const {
    return values[p * static_cast<std::size_t>(grid.N) + static_cast<std::size_t>(c)];
  }

  /// |u(x_p)|^2 summed over components.
  double pointwise_norm2(std::size_t p) const;
  /// L^2 norm with cell volume h^n.
  double l2_norm() const;
};

/// Binary field snapshot: magic "DBSFLD01", u8 endianness flag (1 = little),
/// u32 n, u32 M, u32 N, f64 L, then dof complex values as (re, im) f64 pairs.
/// Everything is written little-endian.
void write_field(const FieldOnGrid& field, const std::filesystem::path& path);
FieldOnGrid read_field(const std::filesystem::path& path);

} // namespace diracbs
