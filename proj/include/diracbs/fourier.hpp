#pragma once

#include <memory>
#include <vector>

#include "diracbs/grid.hpp"

namespace diracbs {

/// n-dimensional FFT over all N interleaved components of a grid field.
/// forward is unnormalized, backward carries the 1/M^n factor, so
/// backward(forward(f)) == f.
class FourierTransform {
public:
  FourierTransform(int n, int M, int components);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  std::size_t size() const { return size_; }
  int components() const { return components_; }

  /// Safe to call concurrently; in and out may alias.
  void forward(const cplx* in, cplx* out) const;
  void backward(const cplx* in, cplx* out) const;

  /// Shared transform for a grid shape (plans are cached per (n, M, N)).
  static const FourierTransform& for_shape(int n, int M, int components);
  static const FourierTransform& for_grid(const GridSpec& g) { return for_shape(g.n, g.M, g.N); }

private:
  struct Plans;
  std::unique_ptr<Plans> plans_;
  std::size_t size_ = 0;
  std::size_t points_ = 0;
  int components_ = 1;
};

/// Fourier coefficients of a field (same layout as FieldOnGrid::values).
std::vector<cplx> to_fourier(const FieldOnGrid& f);
FieldOnGrid from_fourier(const GridSpec& grid, std::vector<cplx> coeffs);

} // namespace diracbs
