#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "diracbs/envelope.hpp"
#include "diracbs/grid.hpp"
#include "diracbs/types.hpp"

namespace diracbs {

/// Potential sampled on a GridSpec lattice (one N x N matrix per sample).
struct SampledPotential {
  GridSpec lattice;  // lattice.N is unused; matrices are N x N below
  int N = 1;
  std::vector<CMatrix> matrices;  // indexed by flat point index
};

/// Matrix-valued potential V : R^n -> C^{N x N}.
///
/// Presets (c complex, r = |x|):
///   inverse-square   c (1+r)^{-2} I_N            (alias complex-inverse-square)
///   bump             c exp(1 - 1/(1 - (r/R)^2)) I_N for r < R, else 0
///   dyadic-decay     c r^{-1} (1 + |log r|)^{-sigma} I_N
///   matrix-mix       c (1+r)^{-2} (alpha_1 + i I_N)
/// Grid-sampled potentials use nearest-sample lookup inside their box.
class PotentialSpec {
public:
  enum class Shape { inverse_square, bump, dyadic_decay, matrix_mix, grid_sampled };

  static PotentialSpec preset(const std::string& name, int n, int N, cplx coupling, double radius = 1.0,
                              double sigma = 2.0);
  static PotentialSpec sampled(std::shared_ptr<const SampledPotential> data, std::string label = "grid-sampled");
  static PotentialSpec zero(int n, int N);

  int dimension() const { return n_; }
  int matrix_size() const { return N_; }
  Shape shape() const { return shape_; }
  cplx coupling() const { return coupling_; }
  double radius() const { return radius_; }
  double sigma() const { return sigma_; }
  const std::string& label() const { return label_; }
  bool is_zero() const { return is_zero_; }
  const SampledPotential* samples() const { return samples_.get(); }

  /// Same shape with coupling multiplied by s.
  PotentialSpec scaled(cplx s) const;

  CMatrix eval(std::span<const double> x) const;
  /// Largest singular value of V(x).
  double opnorm(std::span<const double> x) const;
  /// Radial majorant envelope of |V(x)|.
  RadialEnvelope envelope() const;

  /// Canonical text description (used for hashing and reports).
  std::string describe() const;

private:
  int n_ = 3;
  int N_ = 1;
  Shape shape_ = Shape::inverse_square;
  cplx coupling_{0.0, 0.0};
  double radius_ = 1.0;
  double sigma_ = 2.0;
  std::string label_;
  bool is_zero_ = false;
  CMatrix structure_;          // constant matrix factor of presets
  double structure_norm_ = 1.0;
  std::shared_ptr<const SampledPotential> samples_;

  double profile(double r) const;
};

std::string to_string(PotentialSpec::Shape shape);

CMatrix eval_potential(const PotentialSpec& V, std::span<const double> x);
double pointwise_opnorm(const PotentialSpec& V, std::span<const double> x);
/// Largest singular value of a matrix.
double matrix_opnorm(const CMatrix& m);

/// Pointwise factors of V = B^* A from the polar decomposition V = U W:
/// W = sqrt(V^* V), A = sqrt(W), B = sqrt(W) U^*.
struct MatrixFactors {
  CMatrix A;
  CMatrix B;
  CMatrix U;
  CMatrix W;
};

/// U is the unitary P Q^* from the SVD V = P S Q^*; it agrees with the polar
/// partial isometry on ran W and is the identity when V = 0.
MatrixFactors polar_factors(const CMatrix& v);

class Factorization {
public:
  explicit Factorization(PotentialSpec potential) : potential_(std::move(potential)) {}

  CMatrix A(std::span<const double> x) const { return polar_factors(potential_.eval(x)).A; }
  CMatrix B(std::span<const double> x) const { return polar_factors(potential_.eval(x)).B; }
  MatrixFactors at(std::span<const double> x) const { return polar_factors(potential_.eval(x)); }
  const PotentialSpec& potential() const { return potential_; }

private:
  PotentialSpec potential_;
};

Factorization polar_factorize(const PotentialSpec& V);

/// Text table: '#' comment lines, a header line "n N M L", then one line per
/// sample: n lattice indices followed by the N*N entries in row-major order,
/// each as "re im".
void write_potential_text(const SampledPotential& data, const std::filesystem::path& path);
/// Binary: magic "DBSPOT01", u32 n, u32 N, u32 M, f64 L, then for every
/// sample in flat order the N*N row-major entries as (re, im) f64 pairs;
/// little-endian throughout.
void write_potential_binary(const SampledPotential& data, const std::filesystem::path& path);
/// Reads either format (binary detected by its magic).
std::shared_ptr<SampledPotential> read_potential_file(const std::filesystem::path& path);

/// Samples a potential on the lattice of `grid` (grid.N ignored).
std::shared_ptr<SampledPotential> sample_potential(const PotentialSpec& V, const GridSpec& grid);

} // namespace diracbs
