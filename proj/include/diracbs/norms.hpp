#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "diracbs/envelope.hpp"
#include "diracbs/grid.hpp"
#include "diracbs/potential.hpp"
#include "diracbs/weights.hpp"

namespace diracbs {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Nonnegative scalar field on R^n.
using ScalarField = std::function<double(std::span<const double>)>;

struct DyadicRange {
  int j_min = -40;
  int j_max = 40;
};

struct SamplingOptions {
  int radial = 24;         // q = inf: radial lattice points per annulus
  int angular = 48;        // q = inf: directions (n >= 2)
  int refine_rounds = 3;   // local refinement rounds around current maximizers
  int refine_top = 4;      // maximizers refined per round
};
// q = 2 uses a fixed 20-node Gauss-Legendre rule in log r and 12 nodes per
// polar angle (24 uniform azimuth nodes).

/// Dyadic norm estimate. `value` covers the annuli j_min..j_max only; the
/// contribution of the omitted annuli is bounded by `tail_bound` when a decay
/// envelope was supplied. upper_bound() combines both.
struct NormResult {
  double value = 0.0;
  double p = kInf;
  double q = kInf;
  int j_min = 0;
  int j_max = 0;
  std::optional<double> tail_bound;
  bool divergent = false;
  std::vector<double> per_annulus;
  std::vector<std::size_t> samples_per_annulus;

  bool tail_known() const { return tail_bound.has_value(); }
  /// l^p combination of value and tail (max for p = inf); empty when the
  /// sum diverges or the tail is unknown.
  std::optional<double> upper_bound() const;
  std::size_t total_samples() const;
};

/// ||f||_{l^p L^q} over the annuli 2^{j-1} <= |x| < 2^j, j in range.
/// p in {1, 2, inf}, q in {2, inf}. `envelope` bounds f radially (sup over
/// annuli); it is converted to an L^q envelope internally.
NormResult dyadic_norm(const ScalarField& f, int n, double p, double q, DyadicRange range = {},
                       std::optional<RadialEnvelope> envelope = std::nullopt, const SamplingOptions& opts = {});

/// ||w f||_{L^inf} through the dyadic decomposition with p = q = inf.
NormResult weighted_sup_norm(const ScalarField& f, int n, const WeightSpec& w,
                             std::optional<RadialEnvelope> f_envelope = std::nullopt, DyadicRange range = {},
                             const SamplingOptions& opts = {});
NormResult weighted_sup_norm(const ScalarField& f, int n, const ScalarField& w,
                             std::optional<RadialEnvelope> product_envelope = std::nullopt, DyadicRange range = {},
                             const SamplingOptions& opts = {});

/// x -> |V(x)|.
ScalarField opnorm_field(const PotentialSpec& V);
/// x -> w(x).
ScalarField weight_field(const WeightSpec& w);

/// Dyadic annulus index j with 2^{j-1} <= r < 2^j.
int annulus_index(double r);

/// Surface measure of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

// ---------------------------------------------------------------------------
// Norms of grid fields. All of them integrate over the inscribed ball
// |x| < L of the periodic box; the box corners only carry periodization.

/// Per-point geometry of a grid shared by the grid norms.
class GridGeometry {
public:
  explicit GridGeometry(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  double radius(std::size_t p) const { return radius_[p]; }
  bool inside(std::size_t p) const { return radius_[p] < grid_.L; }
  int annulus(std::size_t p) const { return annulus_[p]; }
  int annulus_min() const { return annulus_min_; }
  int annulus_max() const { return annulus_max_; }
  /// Points with |x| < L sorted by radius.
  const std::vector<std::size_t>& by_radius() const { return by_radius_; }
  int shell(std::size_t p) const { return shell_[p]; }
  int complete_shells() const { return complete_shells_; }
  double shell_radius(int s) const { return shell_radius_[static_cast<std::size_t>(s)]; }

private:
  GridSpec grid_;
  std::vector<double> radius_;
  std::vector<int> annulus_;
  std::vector<int> shell_;
  std::vector<std::size_t> by_radius_;
  std::vector<double> shell_radius_;
  int annulus_min_ = 0;
  int annulus_max_ = 0;
  int complete_shells_ = 0;
};

/// Per-point |u(x_p)|^2 (summed over components).
std::vector<double> density(const FieldOnGrid& u);
/// density multiplied pointwise by w(|x|)^2.
std::vector<double> weighted_density(const GridGeometry& geom, std::span<const double> dens, const WeightSpec& w);

/// ||u||_{L^2} from the density |u|^2.
double grid_l2(const GridGeometry& geom, std::span<const double> dens);
/// ||u||_{l^p L^2}; p in {1, 2, inf}.
double grid_dyadic_l2(const GridGeometry& geom, std::span<const double> dens, double p);
/// ||u||_{X}: sup_R R^{-1} (int_{|x|=R} |u|^2)^{1/2} over complete shells of width h.
double grid_morrey_x(const GridGeometry& geom, std::span<const double> dens);
/// ||u||_{Y}: sup_{R <= L} (R^{-1} int_{|x|<=R} |u|^2)^{1/2}.
double grid_morrey_y(const GridGeometry& geom, std::span<const double> dens);

struct MorreyNorms {
  double X = 0.0;
  double Y = 0.0;
  double Ystar_dyadic = 0.0;  // || |x|^{1/2} u ||_{l^1 L^2}
};

MorreyNorms morrey_norms(const FieldOnGrid& u);
MorreyNorms morrey_norms(const GridGeometry& geom, std::span<const double> dens);

} // namespace diracbs
