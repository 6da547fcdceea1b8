#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "diracbs/grid_operators.hpp"
#include "diracbs/power_iteration.hpp"
#include "diracbs/weights.hpp"

namespace diracbs {

/// K_z = A (H_0 - z)^{-1} B^* on a grid, with A, B the pointwise polar
/// factors of V (V = B^* A).
class BirmanSchwinger {
public:
  BirmanSchwinger(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid);

  const FreeOperator& free_operator() const { return H0_; }
  const GridSpec& grid() const { return H0_.grid(); }
  const PotentialSpec& potential() const { return V_; }
  std::size_t dim() const { return grid().dof(); }

  /// out = K_z in (in and out may alias).
  void apply(cplx z, const cplx* in, cplx* out) const;
  /// out = K_z^* in = B (H_0 - conj z)^{-1} A^* in.
  void apply_adjoint(cplx z, const cplx* in, cplx* out) const;
  FieldOnGrid apply(cplx z, const FieldOnGrid& f) const;

  PowerResult norm(cplx z, const PowerOptions& opts = {}) const;
  /// Dense K_z, column by column.
  CMatrix dense(cplx z, std::size_t limit = kDenseLimit) const;

  /// max_p |A(x_p)| w(x_p) and max_p |B(x_p)| w(x_p).
  double weighted_factor_sup(const WeightSpec& w, bool use_b) const;

private:
  PotentialSpec V_;
  FreeOperator H0_;
  std::vector<cplx> A_, B_;  // N x N row-major block per point
  std::vector<double> a_norm_, b_norm_;
  bool zero_ = false;

  void multiply_blocks(const std::vector<cplx>& blocks, bool adjoint, const cplx* in, cplx* out) const;
};

FieldOnGrid bs_apply(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const FieldOnGrid& f);
double bs_norm(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const GridSpec& grid, double tol = 1e-4);

struct ScanRectangle {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;
};

struct BSScan {
  ScanRectangle rect;
  int n_re = 0;
  int n_im = 0;
  OperatorKind kind = OperatorKind::dirac;
  double m = 0.0;
  std::string potential_hash;
  GridSpec grid;
  double near_real_cutoff = 0.1;
  double tol = 1e-4;
  /// Row-major over (im index, re index); re varies fastest.
  std::vector<cplx> z;
  std::vector<double> values;   // 0 at excluded points
  std::vector<bool> excluded;

  struct Summary {
    std::size_t evaluated = 0;
    std::size_t excluded = 0;
    std::size_t at_least_one = 0;      // ||K_z|| >= 1
    std::size_t at_least_one_off_axis = 0;  // ... with |Im z| > cutoff
    double max_value = 0.0;
    std::optional<ScanRectangle> bounding_box;  // of {||K_z|| >= 1}
  };
  Summary summary() const;
};

/// Lattice of n_re x n_im points including the rectangle corners; points
/// within kNearSingular of a symbol value are excluded.
BSScan bs_scan(OperatorKind kind, double m, const PotentialSpec& V, const GridSpec& grid, const ScanRectangle& rect,
               int n_re, int n_im, const PowerOptions& opts = {}, int threads = 1, double near_real_cutoff = 0.1);

/// CSV with header re,im,norm_estimate,excluded.
void write_scan_csv(const BSScan& scan, std::ostream& out);

/// Eigenvalue lambda of H_V next to the spectrum of the dense K_lambda.
struct CorrespondenceEntry {
  cplx lambda;
  double distance_to_free = 0.0;   // distance to the free discrete spectrum
  double minus_one_gap = 0.0;      // min |mu + 1| over eigenvalues mu of K_lambda
};

/// Checks every eigenvalue of H_V at distance > cutoff from the free spectrum.
std::vector<CorrespondenceEntry> eigenvalue_correspondence(OperatorKind kind, double m, const PotentialSpec& V,
                                                           const GridSpec& grid, double cutoff = 0.1,
                                                           std::size_t limit = 512);
/// Same for eigenvalues computed elsewhere.
std::vector<CorrespondenceEntry> eigenvalue_correspondence(const BirmanSchwinger& K, const std::vector<cplx>& lambdas,
                                                           double cutoff = 0.1, std::size_t limit = 512);

/// ||K_z|| against ||A w||_inf ||w^{-1} R_0(z) w^{-1}|| ||w B||_inf.
struct NormChain {
  double bs_norm = 0.0;
  double a_factor = 0.0;
  double middle = 0.0;
  double b_factor = 0.0;
  double bound() const { return a_factor * middle * b_factor; }
};

NormChain norm_bound_chain(OperatorKind kind, double m, cplx z, const PotentialSpec& V, const GridSpec& grid,
                           const WeightSpec& w, const PowerOptions& opts = {});

/// ||K_{lambda + i eps}|| for eps in {1e-1, 1e-2, 1e-3}.
std::vector<std::pair<double, double>> limiting_trend(OperatorKind kind, double m, double lambda,
                                                      const PotentialSpec& V, const GridSpec& grid,
                                                      const PowerOptions& opts = {});

} // namespace diracbs
