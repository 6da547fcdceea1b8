#pragma once

#include <optional>

namespace diracbs {

/// Upper bound coeff * r^power * (1 + |ln r|)^log_power on one side of r = 1.
struct PowerLogBound {
  double coeff = 0.0;
  double power = 0.0;
  double log_power = 0.0;

  PowerLogBound operator*(const PowerLogBound& o) const {
    return {coeff * o.coeff, power + o.power, log_power + o.log_power};
  }
};

/// Analytic decay envelope of a radial majorant g(r) >= |f(x)|, |x| = r:
/// `inner` holds on 0 < r <= inner_limit (<= 1), `outer` on r >= outer_limit
/// (>= 1). Envelopes multiply, so a weighted potential gets its envelope from
/// the envelopes of its factors. Limits away from 1 allow tighter constants
/// for the far annuli.
struct RadialEnvelope {
  PowerLogBound inner;
  PowerLogBound outer;
  double inner_limit = 1.0;
  double outer_limit = 1.0;

  static RadialEnvelope constant(double c) { return {{c, 0.0, 0.0}, {c, 0.0, 0.0}}; }
  static RadialEnvelope power(double s) { return {{1.0, s, 0.0}, {1.0, s, 0.0}}; }

  RadialEnvelope operator*(const RadialEnvelope& o) const {
    return {inner * o.inner, outer * o.outer, inner_limit < o.inner_limit ? inner_limit : o.inner_limit,
            outer_limit > o.outer_limit ? outer_limit : o.outer_limit};
  }

  /// Rigorous bound of sup g over the dyadic annulus 2^{j-1} <= r < 2^j.
  double annulus_bound(int j) const;

  /// l^p-aggregate (p may be +infinity) of annulus_bound over all j < j_min
  /// and j > j_max. Empty when the envelope does not decay fast
  /// enough for the sum (or sup) to be finite, or when the omitted annuli
  /// are not covered by the validity limits.
  std::optional<double> tail(int j_min, int j_max, double p) const;
};

} // namespace diracbs
