#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diracbs/norms.hpp"
#include "diracbs/potential.hpp"
#include "diracbs/weights.hpp"

namespace diracbs {

/// 576 n max{sqrt(n), (64n + 324)^{1/4}}.
double C2(int n);
/// sqrt(pi / (2(n - 2))).
double kato_yajima(int n);
/// 1 + |(z+m)/(z-m)|^{sgn(Re z)/2} with sgn(0) = +1.
double dirac_bracket(cplx z, double m);
/// <z> = sqrt(1 + |z|^2).
double japanese_bracket(cplx z);

/// Norms of the weight rho entering C1 and C3.
struct RhoNorms {
  double l2_linf = 0.0;        // ||rho||_{l^2 L^inf}
  double half_power_sup = kInf;  // || |x|^{1/2} rho ||_{L^inf}
};

/// Upper bounds of both norms (value combined with the tail bound); kInf
/// when a norm diverges or its tail is unknown.
RhoNorms rho_norms(const WeightSpec& rho, int n, DyadicRange range = {}, const SamplingOptions& opts = {});

struct ConstantsReport {
  int n = 3;
  double m = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  std::optional<double> C3;  // needs a finite || |x|^{1/2} rho ||_{L^inf}
  double kato_yajima = 0.0;
  RhoNorms rho;
};

/// Closed-form constants. n < 3 is a DomainError; m > 0 needs a finite
/// half_power_sup.
ConstantsReport eval_constants(int n, double m, const RhoNorms& rho);

/// Two closed disks of radius r0 centred at x0_minus, x0_plus.
struct DiskPair {
  int j = 1;
  double m = 0.0;
  double N_j = 0.0;
  double C2 = 0.0;
  double V_j = kInf;
  double x0_plus = 0.0;
  double x0_minus = 0.0;
  double r0 = 0.0;

  bool contains(cplx z, double slack = 0.0) const;
};

/// Disks for 2 C2 N_j < 1; ValidationError otherwise or when m <= 0.
DiskPair disk_pair(double m, double N_j, double C2, int j);

enum class Verdict { stable, enclosure, inconclusive };
std::string to_string(Verdict v);

struct NormEntry {
  std::string name;
  double value = 0.0;
  std::optional<double> tail_bound;
  std::optional<double> upper_bound;
  bool divergent = false;
  std::size_t samples = 0;
};

struct CertifyParams {
  double m = 0.0;
  double epsilon = 0.5;   // tau weight
  double sigma = 2.0;     // w_sigma weight
  WeightSpec rho = WeightSpec::rho2(0.5, 0.5);
  DyadicRange range;
  SamplingOptions sampling;

  std::string describe() const;
};

struct Certificate {
  std::string theorem;
  Verdict verdict = Verdict::inconclusive;
  std::vector<NormEntry> norms;
  std::optional<ConstantsReport> constants;
  /// The condition reads constant * norm < 1; threshold = 1 / constant.
  std::optional<double> constant;
  std::optional<double> threshold;
  /// constant * upper bound of the norm.
  std::optional<double> product;
  std::optional<DiskPair> disks;
  std::string input_hash;
  std::vector<std::string> notes;
};

/// Theorem ids: 2.1, 2.2-massless, 2.2-massive, 2.3, 2.4, 2.5-j1, 2.5-j2.
const std::vector<std::string>& theorem_ids();

Certificate certify(const std::string& theorem, const PotentialSpec& V, const CertifyParams& params);
Certificate enclosure_disks(const PotentialSpec& V, double m, int j, const CertifyParams& params);

/// tau_eps^2.
WeightSpec tau_squared(double eps);
/// |x| rho^{-2}.
WeightSpec rho_condition_weight(const WeightSpec& rho);

/// ||w V||_{L^inf} and the dyadic N_1, N_2 with tails.
NormEntry weighted_potential_sup(const PotentialSpec& V, const WeightSpec& w, const std::string& name,
                                 DyadicRange range = {}, const SamplingOptions& opts = {});
NormEntry n1_norm(const PotentialSpec& V, DyadicRange range = {}, const SamplingOptions& opts = {});

} // namespace diracbs
