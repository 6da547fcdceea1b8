#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library: plain loops over std::complex arrays.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Column-major dense matrix.
struct Dense {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> a;
  Dense(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  cplx& operator()(int i, int j) { return a[static_cast<std::size_t>(j) * rows + i]; }
  cplx operator()(int i, int j) const { return a[static_cast<std::size_t>(j) * rows + i]; }
};

template <class M>
Dense from(const M& m) {
  Dense d(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int j = 0; j < d.cols; ++j)
    for (int i = 0; i < d.rows; ++i) d(i, j) = m(i, j);
  return d;
}

/// Singular values by one-sided Jacobi (Hestenes) rotations, descending.
inline std::vector<double> singular_values(Dense m) {
  const int R = m.rows, C = m.cols;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < C - 1; ++p)
      for (int q = p + 1; q < C; ++q) {
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (int i = 0; i < R; ++i) {
          alpha += std::norm(m(i, p));
          beta += std::norm(m(i, q));
          gamma += std::conj(m(i, p)) * m(i, q);
        }
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        off = std::max(off, g / std::sqrt(alpha * beta));
        // Phase-align column q so that <p, q> is real, then rotate.
        const cplx phase = std::conj(gamma / g);
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int i = 0; i < R; ++i) {
          const cplx x = m(i, p);
          const cplx y = m(i, q) * phase;
          m(i, p) = c * x - s * y;
          m(i, q) = s * x + c * y;
        }
      }
    if (off < 1e-15) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(C));
  for (int j = 0; j < C; ++j) {
    double s = 0.0;
    for (int i = 0; i < R; ++i) s += std::norm(m(i, j));
    sv[static_cast<std::size_t>(j)] = std::sqrt(s);
  }
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

inline Dense multiply(const Dense& x, const Dense& y) {
  Dense z(x.rows, y.cols);
  for (int j = 0; j < y.cols; ++j)
    for (int k = 0; k < x.cols; ++k) {
      const cplx b = y(k, j);
      for (int i = 0; i < x.rows; ++i) z(i, j) += x(i, k) * b;
    }
  return z;
}

/// trace(A^k).
inline cplx trace_power(const Dense& a, int k) {
  Dense p = a;
  for (int i = 1; i < k; ++i) p = multiply(p, a);
  cplx t = 0.0;
  for (int i = 0; i < a.rows; ++i) t += p(i, i);
  return t;
}

/// Determinant by Gaussian elimination with partial pivoting.
inline cplx determinant(Dense a) {
  const int n = a.rows;
  cplx det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int i = col + 1; i < n; ++i) {
      const cplx f = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

/// Dyadic l^p L^inf norm of a radial profile g(r) by dense sampling of every
/// annulus 2^{j-1} <= r < 2^j, j in [j_min, j_max], with local refinement
/// around each sampled maximum. p = +inf gives the sup.
inline double dyadic_radial(const std::function<double(double)>& g, double p, int j_min = -70, int j_max = 70,
                            int samples = 4000) {
  double acc = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    const double lo = std::ldexp(1.0, j - 1);
    double best = 0.0;
    int arg = 0;
    for (int k = 0; k <= samples; ++k) {
      const double t = std::min(static_cast<double>(k) / samples, 1.0 - 1e-13);
      const double v = std::abs(g(lo * std::exp2(t)));
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    // refine in the neighbouring cells of the best sample
    double a = std::max(0.0, (arg - 1.0) / samples), b = std::min(1.0 - 1e-13, (arg + 1.0) / samples);
    for (int round = 0; round < 4; ++round) {
      for (int k = 0; k <= 200; ++k) best = std::max(best, std::abs(g(lo * std::exp2(a + (b - a) * k / 200.0))));
      const double mid = 0.5 * (a + b), half = 0.25 * (b - a);
      a = std::max(0.0, mid - half);
      b = std::min(1.0 - 1e-13, mid + half);
    }
    if (std::isinf(p)) acc = std::max(acc, best);
    else acc += std::pow(best, p);
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

} // namespace oracle
