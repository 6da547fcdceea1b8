#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diracbs/clifford.hpp"
#include "diracbs/grid.hpp"
#include "diracbs/potential.hpp"

namespace diracbs {

/// Components per point the operator acts on: 1 for the scalar kinds,
/// 2^ceil(n/2) for Dirac. Scalar kinds accept any N and act diagonally.
int operator_components(OperatorKind kind, int n);

/// Distance below which z counts as hitting a symbol value.
inline constexpr double kNearSingular = 1e-8;

/// Free operator -Laplacian, sqrt(m^2 - Laplacian) or the Dirac operator as a
/// Fourier multiplier on a periodic grid.
class FreeOperator {
public:
  FreeOperator(OperatorKind kind, double m, const GridSpec& grid);

  OperatorKind kind() const { return kind_; }
  double mass() const { return m_; }
  const GridSpec& grid() const { return grid_; }
  const CliffordRep& clifford() const { return rep_; }

  /// Multiplies Fourier coefficients by the symbol (in and out may alias).
  void symbol_multiply(const cplx* in, cplx* out) const;
  /// Multiplies Fourier coefficients by the resolvent symbol at z.
  void resolvent_multiply(cplx z, const cplx* in, cplx* out) const;
  /// Throws ComputationError when z is within kNearSingular of a symbol value.
  void check_resolvent(cplx z) const;
  /// Distance from z to the discrete symbol values.
  double distance_to_spectrum(cplx z) const;

  FieldOnGrid apply(const FieldOnGrid& f) const;
  FieldOnGrid resolvent(cplx z, const FieldOnGrid& f) const;

  /// Eigenvalues of the free operator with multiplicity, ascending.
  std::vector<double> spectrum() const;

  /// Symbol values sqrt(m^2 + |xi|^2) (Klein-Gordon, Dirac) or |xi|^2 at point p.
  double symbol_value(std::size_t p) const;

private:
  OperatorKind kind_;
  double m_;
  GridSpec grid_;
  CliffordRep rep_;
  std::vector<double> xi_;     // points * n
  std::vector<double> xi2_;    // |xi|^2 per point
  std::vector<cplx> alpha_flat_;  // Dirac: alphas row-major

  void combine(const double* coeffs, cplx shift, const cplx* v, cplx* out) const;
};

FieldOnGrid apply_free(OperatorKind kind, double m, const FieldOnGrid& f);
FieldOnGrid apply_free_resolvent(OperatorKind kind, double m, cplx z, const FieldOnGrid& f);

/// Partial derivatives d_k f, k = 0..n-1, by spectral differentiation.
std::vector<FieldOnGrid> gradient(const FieldOnGrid& f);

// ---------------------------------------------------------------------------
// Dense assembly and eigenvalues.

inline constexpr std::size_t kDenseLimit = 4096;

/// Dense matrix of the free operator on the grid.
CMatrix assemble_free(OperatorKind kind, double m, const GridSpec& grid, std::size_t limit = kDenseLimit);

/// H_V = H_0 + V with V acting block-diagonally at the sample points.
/// grid.N must match the operator components and V's matrix size.
CMatrix assemble_perturbed(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid,
                           std::size_t limit = kDenseLimit);

struct EigenDiagnostics {
  std::size_t checked = 0;
  double max_residual = 0.0;  // max ||Hv - lambda v|| / ||v|| over checked pairs
  double tolerance = 0.0;
};

/// Full non-Hermitian eigenvalues sorted by real part, then imaginary part.
/// Residuals of 10 evenly spaced eigenpairs are checked against
/// 1e-8 max(1, ||H||_1).
std::vector<cplx> eigenvalues(const CMatrix& H, EigenDiagnostics* diagnostics = nullptr,
                              std::size_t limit = kDenseLimit);

} // namespace diracbs
