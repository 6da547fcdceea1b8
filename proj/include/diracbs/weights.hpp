#pragma once

#include <span>
#include <string>
#include <vector>

#include "diracbs/envelope.hpp"

namespace diracbs {

/// Radial weight functions.
///   tau      |x|^{1/2-eps} + |x|
///   w_sigma  |x| (1 + |log|x||)^sigma
///   rho1     (1 + |log|x||)^{-sigma/2}
///   rho2     (|x|^{-eps} + |x|^delta)^{-1}
///   power    |x|^exponent
///   product  prod_i factors[i], raised to `exponent`
struct WeightSpec {
  enum class Kind { tau, w_sigma, rho1, rho2, power, product };

  Kind kind = Kind::power;
  double epsilon = 0.5;
  double sigma = 2.0;
  double delta = 0.5;
  double exponent = 1.0;
  std::vector<WeightSpec> factors;

  static WeightSpec tau(double eps);
  static WeightSpec w_sigma(double sigma);
  static WeightSpec rho1(double sigma);
  static WeightSpec rho2(double eps, double delta);
  static WeightSpec power(double exponent);
  /// (prod factors)^exponent
  static WeightSpec product(std::vector<WeightSpec> factors, double exponent = 1.0);

  /// Value at radius r > 0.
  double at_radius(double r) const;

  /// Majorant envelope usable for dyadic tail bounds; the inner form holds
  /// for r <= r_in, the outer for r >= r_out.
  RadialEnvelope envelope(double r_in = 1.0, double r_out = 1.0) const;
  /// Power-log lower bound, needed when the weight appears with a negative
  /// exponent inside a product.
  RadialEnvelope minorant(double r_in = 1.0, double r_out = 1.0) const;

  std::string describe() const;

  bool operator==(const WeightSpec&) const = default;
};

/// Weight at the point x; x = 0 is a DomainError.
double weight_eval(const WeightSpec& w, std::span<const double> x);

std::string to_string(WeightSpec::Kind kind);
WeightSpec::Kind weight_kind_from_string(const std::string& name);

} // namespace diracbs
