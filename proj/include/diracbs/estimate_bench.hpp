#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diracbs/enclosure.hpp"
#include "diracbs/grid_operators.hpp"
#include "diracbs/norms.hpp"

namespace diracbs {

/// Estimate ids. Explicit constants: L3.3-*, C3.4-*, C3.5-*, L3.6-*, KY.
/// Report only (non-explicit constant): L3.1-KG, L3.2-D0, L3.2-Dm.
const std::vector<std::string>& estimate_ids();
bool estimate_is_explicit(const std::string& id);

/// Deterministic spectral parameters: `count` points with |z| log-spaced in
/// [r_min, r_max] and golden-ratio angles, skipping the sectors of half-width
/// `sector` around arg z = 0 and arg z = pi.
struct ZSampler {
  int count = 40;
  double r_min = 0.1;
  double r_max = 10.0;
  double sector = 0.1;

  std::vector<cplx> points() const;
};

struct BenchConfig {
  GridSpec grid{3, 8.0, 32, 1};  // N is set per operator
  double m = 1.0;
  int trials = 100;
  std::uint64_t seed = 1;
  double slack = 0.1;
  ZSampler sampler;
  std::vector<double> eps_sweep{0.05, 0.1, 0.2};
  double sigma = 2.0;
  WeightSpec rho = WeightSpec::rho2(0.5, 0.5);
  int threads = 1;

  void validate() const;
};

struct BenchReport {
  std::string estimate;
  std::string parameter;  // e.g. "eps=0.1" for report-only sweeps
  int trials = 0;
  int discarded = 0;
  std::vector<cplx> z_samples;
  std::vector<double> ratio_by_z;  // max over trials at each z
  double max_ratio = 0.0;
  cplx argmax_z{};
  std::optional<double> constant;  // empty: non-explicit
  GridSpec grid;
  double m = 0.0;
  double slack = 0.1;
  std::optional<bool> pass;
};

/// Random band-limited field: Gaussian Fourier coefficients with
/// |k_a| < M/3 on every axis, multiplied by a smooth bump supported in
/// |x| <= L/2.
FieldOnGrid random_test_field(const GridSpec& grid, std::mt19937_64& rng);
FieldOnGrid random_test_field(const GridSpec& grid, std::uint64_t seed);

/// Shared per-grid state of the bench (operators, weights, constants).
class BenchContext {
public:
  explicit BenchContext(const BenchConfig& cfg);
  ~BenchContext();
  BenchContext(const BenchContext&) = delete;
  BenchContext& operator=(const BenchContext&) = delete;

  const BenchConfig& config() const;
  const ConstantsReport& constants() const;

  /// Explicit constant of an estimate (empty when non-explicit).
  std::optional<double> constant(const std::string& id) const;

  /// Scalar and spinor grids used by the estimates.
  const GridSpec& scalar_grid() const;
  const GridSpec& spinor_grid() const;

  /// LHS / RHS of every requested estimate at each z, using the scalar field
  /// f for the Schrodinger and Klein-Gordon estimates and the spinor field g
  /// for the Dirac ones. out[e][k] belongs to labels(ids)[e] and zs[k].
  std::vector<std::vector<double>> ratios(const std::vector<std::string>& ids, const FieldOnGrid& f,
                                          const FieldOnGrid& g, const std::vector<cplx>& zs) const;

  /// (id, parameter) pairs produced by ratios() for `ids`.
  std::vector<std::pair<std::string, std::string>> labels(const std::vector<std::string>& ids) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs all listed estimates over cfg.trials random fields sharing the work.
std::vector<BenchReport> run_suite(const std::vector<std::string>& ids, const BenchConfig& cfg);
BenchReport run_bench(const std::string& id, const BenchConfig& cfg);

struct UniformityProbe {
  std::string estimate;
  std::string parameter;
  std::vector<cplx> path;
  std::vector<double> ratios;   // max over trials at each z
  double growth = 1.0;          // exp(|slope| * span) of a log-linear fit
  bool trend = false;           // growth > 2
};

std::vector<UniformityProbe> uniformity_probe(const std::string& id, const BenchConfig& cfg,
                                              const std::vector<cplx>& path);

/// Straight path re0 + i im .. re1 + i im with `count` points.
std::vector<cplx> line_path(double re0, double re1, double im, int count);

/// CSV with header re_z,im_z,ratio.
void write_ratio_csv(const std::vector<cplx>& zs, const std::vector<double>& ratios, std::ostream& out);

} // namespace diracbs
