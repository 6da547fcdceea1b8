#include "diracbs/grid_operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "diracbs/fourier.hpp"

namespace diracbs {

int operator_components(OperatorKind kind, int n) { return kind == OperatorKind::dirac ? spinor_size(n) : 1; }

FreeOperator::FreeOperator(OperatorKind kind, double m, const GridSpec& grid) : kind_(kind), m_(m), grid_(grid) {
  grid_.validate();
  if (!(m >= 0.0) || !std::isfinite(m)) throw ValidationError("mass must be finite and >= 0");
  if (kind == OperatorKind::dirac) {
    rep_ = build_clifford(grid.n);
    if (grid.N != rep_.N)
      throw ValidationError("Dirac operator in dimension " + std::to_string(grid.n) + " needs N = " +
                            std::to_string(rep_.N) + " components, grid has " + std::to_string(grid.N));
    const auto N = static_cast<std::size_t>(rep_.N);
    alpha_flat_.resize(rep_.alphas.size() * N * N);
    for (std::size_t k = 0; k < rep_.alphas.size(); ++k)
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c)
          alpha_flat_[(k * N + r) * N + c] = rep_.alphas[k](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  const std::size_t P = grid_.points();
  const auto n = static_cast<std::size_t>(grid_.n);
  xi_.resize(P * n);
  xi2_.resize(P);
  for (std::size_t p = 0; p < P; ++p) {
    grid_.wavevector(p, std::span<double>(xi_.data() + p * n, n));
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) s += xi_[p * n + a] * xi_[p * n + a];
    xi2_[p] = s;
  }
}

double FreeOperator::symbol_value(std::size_t p) const {
  if (kind_ == OperatorKind::schrodinger) return xi2_[p];
  return std::sqrt(m_ * m_ + xi2_[p]);
}

void FreeOperator::symbol_multiply(const cplx* in, cplx* out) const {
  const std::size_t P = grid_.points();
  const auto N = static_cast<std::size_t>(grid_.N);
  if (kind_ != OperatorKind::dirac) {
    for (std::size_t p = 0; p < P; ++p) {
      const double s = symbol_value(p);
      for (std::size_t c = 0; c < N; ++c) out[p * N + c] = s * in[p * N + c];
    }
    return;
  }
  const auto n = static_cast<std::size_t>(grid_.n);
  std::vector<double> c(n + 1);
  std::vector<cplx> v(N);
  for (std::size_t p = 0; p < P; ++p) {
    c[0] = m_;
    for (std::size_t a = 0; a < n; ++a) c[a + 1] = xi_[p * n + a];
    std::copy(in + p * N, in + (p + 1) * N, v.begin());
    combine(c.data(), 0.0, v.data(), out + p * N);
  }
}

void FreeOperator::combine(const double* coeffs, cplx shift, const cplx* v, cplx* out) const {
  // out = (sum_k coeffs[k] alpha_k + shift) v, alphas stored row-major
  const auto N = static_cast<std::size_t>(grid_.N);
  const std::size_t K = static_cast<std::size_t>(grid_.n) + 1;
  for (std::size_t r = 0; r < N; ++r) {
    cplx acc = shift * v[r];
    for (std::size_t k = 0; k < K; ++k) {
      const cplx* row = alpha_flat_.data() + (k * N + r) * N;
      cplx dot = 0.0;
      for (std::size_t col = 0; col < N; ++col) dot += row[col] * v[col];
      acc += coeffs[k] * dot;
    }
    out[r] = acc;
  }
}

double FreeOperator::distance_to_spectrum(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < xi2_.size(); ++p) {
    const double s = symbol_value(p);
    best = std::min(best, std::abs(z - s));
    if (kind_ == OperatorKind::dirac) best = std::min(best, std::abs(z + s));
  }
  return best;
}

void FreeOperator::check_resolvent(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ValidationError("spectral parameter must be finite");
  const auto n = static_cast<std::size_t>(grid_.n);
  for (std::size_t p = 0; p < xi2_.size(); ++p) {
    const double s = symbol_value(p);
    const bool hit = std::abs(z - s) < kNearSingular ||
                     (kind_ == OperatorKind::dirac && std::abs(z + s) < kNearSingular);
    if (!hit) continue;
    std::ostringstream msg;
    msg.precision(12);
    msg << "near-singular resolvent: z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
        << "i is within " << kNearSingular << " of the symbol value at xi = (";
    for (std::size_t a = 0; a < n; ++a) msg << (a ? ", " : "") << xi_[p * n + a];
    msg << ")";
    throw ComputationError(msg.str());
  }
}

void FreeOperator::resolvent_multiply(cplx z, const cplx* in, cplx* out) const {
  check_resolvent(z);
  const std::size_t P = grid_.points();
  const auto N = static_cast<std::size_t>(grid_.N);
  if (kind_ != OperatorKind::dirac) {
    for (std::size_t p = 0; p < P; ++p) {
      const cplx r = 1.0 / (symbol_value(p) - z);
      for (std::size_t c = 0; c < N; ++c) out[p * N + c] = r * in[p * N + c];
    }
    return;
  }
  // (M(xi) + z) / (|xi|^2 + m^2 - z^2)
  const auto n = static_cast<std::size_t>(grid_.n);
  std::vector<double> c(n + 1);
  std::vector<cplx> v(N);
  for (std::size_t p = 0; p < P; ++p) {
    c[0] = m_;
    for (std::size_t a = 0; a < n; ++a) c[a + 1] = xi_[p * n + a];
    std::copy(in + p * N, in + (p + 1) * N, v.begin());
    combine(c.data(), z, v.data(), out + p * N);
    const cplx d = 1.0 / (xi2_[p] + m_ * m_ - z * z);
    for (std::size_t k = 0; k < N; ++k) out[p * N + k] *= d;
  }
}

FieldOnGrid FreeOperator::apply(const FieldOnGrid& f) const {
  if (!(f.grid == grid_)) throw ValidationError("field grid does not match operator grid");
  const auto& fft = FourierTransform::for_grid(grid_);
  FieldOnGrid out(grid_);
  fft.forward(f.values.data(), out.values.data());
  symbol_multiply(out.values.data(), out.values.data());
  fft.backward(out.values.data(), out.values.data());
  return out;
}

FieldOnGrid FreeOperator::resolvent(cplx z, const FieldOnGrid& f) const {
  if (!(f.grid == grid_)) throw ValidationError("field grid does not match operator grid");
  check_resolvent(z);
  const auto& fft = FourierTransform::for_grid(grid_);
  FieldOnGrid out(grid_);
  fft.forward(f.values.data(), out.values.data());
  resolvent_multiply(z, out.values.data(), out.values.data());
  fft.backward(out.values.data(), out.values.data());
  return out;
}

std::vector<double> FreeOperator::spectrum() const {
  std::vector<double> out;
  out.reserve(grid_.dof());
  const int N = grid_.N;
  for (std::size_t p = 0; p < xi2_.size(); ++p) {
    const double s = symbol_value(p);
    if (kind_ == OperatorKind::dirac) {
      // M(xi) has eigenvalues +-s, each with multiplicity N/2.
      for (int c = 0; c < N / 2; ++c) {
        out.push_back(s);
        out.push_back(-s);
      }
    } else {
      for (int c = 0; c < N; ++c) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FieldOnGrid apply_free(OperatorKind kind, double m, const FieldOnGrid& f) { return FreeOperator(kind, m, f.grid).apply(f); }

FieldOnGrid apply_free_resolvent(OperatorKind kind, double m, cplx z, const FieldOnGrid& f) {
  return FreeOperator(kind, m, f.grid).resolvent(z, f);
}

std::vector<FieldOnGrid> gradient(const FieldOnGrid& f) {
  const GridSpec& g = f.grid;
  g.validate();
  const auto& fft = FourierTransform::for_grid(g);
  std::vector<cplx> hat(f.values.size());
  fft.forward(f.values.data(), hat.data());
  const auto n = static_cast<std::size_t>(g.n);
  const auto N = static_cast<std::size_t>(g.N);
  std::vector<double> xi(n);
  std::vector<FieldOnGrid> out(n, FieldOnGrid(g));
  for (std::size_t p = 0; p < g.points(); ++p) {
    g.wavevector(p, xi);
    const auto idx = g.unravel(p);
    for (std::size_t a = 0; a < n; ++a) {
      // the Nyquist mode has no odd derivative on the lattice; keeps d_k f real for real f
      const double k = idx[a] == g.M / 2 ? 0.0 : xi[a];
      for (std::size_t c = 0; c < N; ++c) out[a].values[p * N + c] = cplx(0.0, k) * hat[p * N + c];
    }
  }
  for (auto& d : out) fft.backward(d.values.data(), d.values.data());
  return out;
}

namespace {

void check_dense_size(std::size_t dim, std::size_t limit) {
  if (dim > limit)
    throw ComputationError("dense operator of dimension " + std::to_string(dim) + " exceeds the limit " +
                           std::to_string(limit) + "; use bs_scan for matrix-free work on this grid");
}

} // namespace

CMatrix assemble_free(OperatorKind kind, double m, const GridSpec& grid, std::size_t limit) {
  const std::size_t dim = grid.dof();
  check_dense_size(dim, limit);
  FreeOperator H0(kind, m, grid);
  const auto& fft = FourierTransform::for_grid(grid);
  const auto D = static_cast<Eigen::Index>(dim);
  CMatrix H(D, D);
  std::vector<cplx> col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
    col[j] = 1.0;
    fft.forward(col.data(), col.data());
    H0.symbol_multiply(col.data(), col.data());
    fft.backward(col.data(), col.data());
    for (std::size_t i = 0; i < dim; ++i) H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return H;
}

CMatrix assemble_perturbed(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid,
                           std::size_t limit) {
  check_dense_size(grid.dof(), limit);
  if (V.dimension() != grid.n) throw ValidationError("potential dimension does not match the grid");
  if (V.matrix_size() != grid.N) throw ValidationError("potential matrix size does not match grid components");
  CMatrix H = assemble_free(kind, m, grid, limit);
  if (V.is_zero()) return H;
  const auto N = static_cast<Eigen::Index>(grid.N);
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t p = 0; p < grid.points(); ++p) {
    grid.position(p, x);
    const auto o = static_cast<Eigen::Index>(p) * N;
    H.block(o, o, N, N) += V.eval(x);
  }
  return H;
}

std::vector<cplx> eigenvalues(const CMatrix& H, EigenDiagnostics* diagnostics, std::size_t limit) {
  if (H.rows() != H.cols()) throw ValidationError("eigenvalues need a square matrix");
  const auto dim = static_cast<std::size_t>(H.rows());
  check_dense_size(dim, limit);
  if (dim == 0) return {};
  if (!H.allFinite()) throw ValidationError("matrix has non-finite entries");

  const auto n = static_cast<lapack_int>(dim);
  CMatrix a = H;
  std::vector<cplx> w(dim);
  CMatrix vr(H.rows(), H.cols());
  cplx vl_dummy{};
  const lapack_int info =
      LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, a.data(), n, w.data(), &vl_dummy, 1, vr.data(), n);
  if (info < 0) throw ComputationError("zgeev: illegal argument " + std::to_string(-info));
  if (info > 0)
    throw ComputationError("zgeev: QR iteration failed to converge; eigenvalues " + std::to_string(info + 1) + ".." +
                           std::to_string(dim) + " converged, " + std::to_string(info) + " did not");

  const double scale = std::max(1.0, H.cwiseAbs().colwise().sum().maxCoeff());
  const double tol = 1e-8 * scale;
  const std::size_t checks = std::min<std::size_t>(10, dim);
  double worst = 0.0;
  for (std::size_t s = 0; s < checks; ++s) {
    const auto j = static_cast<Eigen::Index>(checks == 1 ? 0 : s * (dim - 1) / (checks - 1));
    const CVector v = vr.col(j);
    const double r = (H * v - w[static_cast<std::size_t>(j)] * v).norm() / v.norm();
    worst = std::max(worst, r);
  }
  if (diagnostics) *diagnostics = {checks, worst, tol};
  if (!(worst <= tol))
    throw ComputationError("eigenpair residual " + std::to_string(worst) + " exceeds tolerance " + std::to_string(tol));

  std::sort(w.begin(), w.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return w;
}

} // namespace diracbs
