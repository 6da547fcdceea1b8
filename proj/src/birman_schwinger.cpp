#include "diracbs/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "diracbs/fourier.hpp"
#include "diracbs/hash.hpp"
#include "diracbs/parallel.hpp"

namespace diracbs {

BirmanSchwinger::BirmanSchwinger(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid)
    : V_(V), H0_(kind, m, grid) {
  if (V.dimension() != grid.n) throw ValidationError("potential dimension does not match the grid");
  if (V.matrix_size() != grid.N) throw ValidationError("potential matrix size does not match grid components");
  zero_ = V.is_zero();
  if (zero_) return;
  const std::size_t P = grid.points();
  const auto N = static_cast<std::size_t>(grid.N);
  A_.resize(P * N * N);
  B_.resize(P * N * N);
  a_norm_.resize(P);
  b_norm_.resize(P);
  std::vector<double> x(static_cast<std::size_t>(grid.n));
  for (std::size_t p = 0; p < P; ++p) {
    grid.position(p, x);
    const auto f = polar_factors(V.eval(x));
    for (std::size_t r = 0; r < N; ++r)
      for (std::size_t c = 0; c < N; ++c) {
        A_[(p * N + r) * N + c] = f.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        B_[(p * N + r) * N + c] = f.B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    a_norm_[p] = matrix_opnorm(f.A);
    b_norm_[p] = matrix_opnorm(f.B);
  }
}

void BirmanSchwinger::multiply_blocks(const std::vector<cplx>& blocks, bool adjoint, const cplx* in,
                                      cplx* out) const {
  const auto N = static_cast<std::size_t>(grid().N);
  std::vector<cplx> v(N);
  const std::size_t P = grid().points();
  for (std::size_t p = 0; p < P; ++p) {
    const cplx* b = blocks.data() + p * N * N;  // row-major
    std::copy(in + p * N, in + (p + 1) * N, v.begin());
    for (std::size_t r = 0; r < N; ++r) {
      cplx acc = 0.0;
      if (adjoint)
        for (std::size_t c = 0; c < N; ++c) acc += std::conj(b[c * N + r]) * v[c];
      else
        for (std::size_t c = 0; c < N; ++c) acc += b[r * N + c] * v[c];
      out[p * N + r] = acc;
    }
  }
}

void BirmanSchwinger::apply(cplx z, const cplx* in, cplx* out) const {
  const std::size_t D = dim();
  if (zero_) {
    H0_.check_resolvent(z);
    std::fill(out, out + D, cplx{0.0, 0.0});
    return;
  }
  const auto& fft = FourierTransform::for_grid(grid());
  multiply_blocks(B_, true, in, out);
  fft.forward(out, out);
  H0_.resolvent_multiply(z, out, out);
  fft.backward(out, out);
  multiply_blocks(A_, false, out, out);
}

void BirmanSchwinger::apply_adjoint(cplx z, const cplx* in, cplx* out) const {
  const std::size_t D = dim();
  if (zero_) {
    H0_.check_resolvent(std::conj(z));
    std::fill(out, out + D, cplx{0.0, 0.0});
    return;
  }
  const auto& fft = FourierTransform::for_grid(grid());
  multiply_blocks(A_, true, in, out);
  fft.forward(out, out);
  H0_.resolvent_multiply(std::conj(z), out, out);
  fft.backward(out, out);
  multiply_blocks(B_, false, out, out);
}

FieldOnGrid BirmanSchwinger::apply(cplx z, const FieldOnGrid& f) const {
  if (!(f.grid == grid())) throw ValidationError("field grid does not match operator grid");
  FieldOnGrid out(grid());
  apply(z, f.values.data(), out.values.data());
  return out;
}

PowerResult BirmanSchwinger::norm(cplx z, const PowerOptions& opts) const {
  H0_.check_resolvent(z);
  if (zero_) return {};
  return largest_singular_value(
      dim(), [&](const cplx* x, cplx* y) { apply(z, x, y); }, [&](const cplx* x, cplx* y) { apply_adjoint(z, x, y); },
      opts);
}

CMatrix BirmanSchwinger::dense(cplx z, std::size_t limit) const {
  const std::size_t D = dim();
  if (D > limit)
    throw ComputationError("dense Birman-Schwinger matrix of dimension " + std::to_string(D) + " exceeds the limit " +
                           std::to_string(limit));
  const auto d = static_cast<Eigen::Index>(D);
  CMatrix K(d, d);
  std::vector<cplx> col(D);
  for (std::size_t j = 0; j < D; ++j) {
    std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
    col[j] = 1.0;
    apply(z, col.data(), col.data());
    for (std::size_t i = 0; i < D; ++i) K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return K;
}

double BirmanSchwinger::weighted_factor_sup(const WeightSpec& w, bool use_b) const {
  if (zero_) return 0.0;
  const auto& norms = use_b ? b_norm_ : a_norm_;
  double best = 0.0;
  for (std::size_t p = 0; p < norms.size(); ++p) best = std::max(best, norms[p] * w.at_radius(grid().radius(p)));
  return best;
}

FieldOnGrid bs_apply(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const FieldOnGrid& f) {
  return BirmanSchwinger(kind, m, V, f.grid).apply(z, f);
}

double bs_norm(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const GridSpec& grid, double tol) {
  PowerOptions opts;
  opts.tol = tol;
  return BirmanSchwinger(kind, m, V, grid).norm(z, opts).sigma;
}

BSScan::Summary BSScan::summary() const {
  Summary s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (excluded[i]) {
      ++s.excluded;
      continue;
    }
    ++s.evaluated;
    s.max_value = std::max(s.max_value, values[i]);
    if (values[i] < 1.0) continue;
    ++s.at_least_one;
    if (std::abs(z[i].imag()) > near_real_cutoff) ++s.at_least_one_off_axis;
    if (!s.bounding_box) {
      s.bounding_box = ScanRectangle{z[i].real(), z[i].real(), z[i].imag(), z[i].imag()};
    } else {
      auto& b = *s.bounding_box;
      b.re_min = std::min(b.re_min, z[i].real());
      b.re_max = std::max(b.re_max, z[i].real());
      b.im_min = std::min(b.im_min, z[i].imag());
      b.im_max = std::max(b.im_max, z[i].imag());
    }
  }
  return s;
}

BSScan bs_scan(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid, const ScanRectangle& rect,
               int n_re, int n_im, const PowerOptions& opts, int threads, double near_real_cutoff) {
  if (n_re < 1 || n_im < 1) throw ValidationError("scan resolution must be at least 1 x 1");
  if (!(rect.re_min <= rect.re_max) || !(rect.im_min <= rect.im_max))
    throw ValidationError("scan rectangle bounds are inverted");
  BirmanSchwinger K(kind, m, V, grid);
  BSScan scan;
  scan.rect = rect;
  scan.n_re = n_re;
  scan.n_im = n_im;
  scan.kind = kind;
  scan.m = m;
  scan.potential_hash = hash_hex(V.describe());
  scan.grid = grid;
  scan.near_real_cutoff = near_real_cutoff;
  scan.tol = opts.tol;
  const auto count = static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im);
  scan.z.resize(count);
  scan.values.assign(count, 0.0);
  scan.excluded.assign(count, false);
  auto axis = [](double lo, double hi, int k, int n) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * k / (n - 1); };
  for (int b = 0; b < n_im; ++b)
    for (int a = 0; a < n_re; ++a)
      scan.z[static_cast<std::size_t>(b) * n_re + a] = {axis(rect.re_min, rect.re_max, a, n_re),
                                                          axis(rect.im_min, rect.im_max, b, n_im)};
  std::vector<char> excluded(count, 0);
  parallel_for(count, threads, [&](std::size_t i) {
    if (K.free_operator().distance_to_spectrum(scan.z[i]) < kNearSingular) {
      excluded[i] = 1;
      return;
    }
    scan.values[i] = K.norm(scan.z[i], opts).sigma;
  });
  for (std::size_t i = 0; i < count; ++i) scan.excluded[i] = excluded[i] != 0;
  return scan;
}

void write_scan_csv(const BSScan& scan, std::ostream& out) {
  char buf[160];
  out << "re,im,norm_estimate,excluded\n";
  for (std::size_t i = 0; i < scan.z.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%d\n", scan.z[i].real(), scan.z[i].imag(), scan.values[i],
                  scan.excluded[i] ? 1 : 0);
    out << buf;
  }
}

std::vector<CorrespondenceEntry> eigenvalue_correspondence(OperatorKind kind, double m, const PotentialSpec& V,
                                                           const GridSpec& grid, double cutoff, std::size_t limit) {
  const CMatrix H = assemble_perturbed(kind, m, V, grid, limit);
  const auto lambdas = eigenvalues(H, nullptr, limit);
  return eigenvalue_correspondence(BirmanSchwinger(kind, m, V, grid), lambdas, cutoff, limit);
}

std::vector<CorrespondenceEntry> eigenvalue_correspondence(const BirmanSchwinger& K, const std::vector<cplx>& lambdas,
                                                           double cutoff, std::size_t limit) {
  std::vector<CorrespondenceEntry> out;
  for (const cplx& lambda : lambdas) {
    const double d = K.free_operator().distance_to_spectrum(lambda);
    if (!(d > cutoff)) continue;
    const auto mus = eigenvalues(K.dense(lambda, limit), nullptr, limit);
    double gap = std::numeric_limits<double>::infinity();
    for (const cplx& mu : mus) gap = std::min(gap, std::abs(mu + 1.0));
    out.push_back({lambda, d, gap});
  }
  return out;
}

NormChain norm_bound_chain(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const GridSpec& grid,
                           const WeightSpec& w, const PowerOptions& opts) {
  BirmanSchwinger K(kind, m, V, grid);
  NormChain chain;
  chain.bs_norm = K.norm(z, opts).sigma;
  chain.a_factor = K.weighted_factor_sup(w, false);
  chain.b_factor = K.weighted_factor_sup(w, true);

  const FreeOperator& H0 = K.free_operator();
  const auto& fft = FourierTransform::for_grid(grid);
  const std::size_t D = grid.dof();
  const auto N = static_cast<std::size_t>(grid.N);
  std::vector<double> inv_w(grid.points());
  for (std::size_t p = 0; p < inv_w.size(); ++p) inv_w[p] = 1.0 / w.at_radius(grid.radius(p));
  auto middle = [&](cplx zz, const cplx* x, cplx* y) {
    for (std::size_t i = 0; i < D; ++i) y[i] = inv_w[i / N] * x[i];
    fft.forward(y, y);
    H0.resolvent_multiply(zz, y, y);
    fft.backward(y, y);
    for (std::size_t i = 0; i < D; ++i) y[i] *= inv_w[i / N];
  };
  chain.middle = largest_singular_value(
                     D, [&](const cplx* x, cplx* y) { middle(z, x, y); },
                     [&](const cplx* x, cplx* y) { middle(std::conj(z), x, y); }, opts)
                     .sigma;
  return chain;
}

std::vector<std::pair<double, double>> limiting_trend(OperatorKind kind, double m, double lambda,
                                                      const PotentialSpec& V, const GridSpec& grid,
                                                      const PowerOptions& opts) {
  BirmanSchwinger K(kind, m, V, grid);
  std::vector<std::pair<double, double>> out;
  for (double eps : {1e-1, 1e-2, 1e-3}) out.emplace_back(eps, K.norm({lambda, eps}, opts).sigma);
  return out;
}

} // namespace diracbs
