#include "diracbs/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace diracbs {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr int kExplicitTerms = 4000;

double form_bound(const PowerLogBound& b, int j, bool inner) {
  if (b.coeff == 0.0) return 0.0;
  // r in [2^{j-1}, 2^j)
  const double r_pow = b.power >= 0.0 ? std::exp2(b.power * j) : std::exp2(b.power * (j - 1));
  // |ln r| lies in (|j| ln2, (|j|+1) ln2] for j <= 0 and in [(j-1) ln2, j ln2) for j >= 1
  const double lo = inner ? std::abs(j) * kLn2 : (j - 1) * kLn2;
  const double hi = inner ? (std::abs(j) + 1) * kLn2 : j * kLn2;
  const double log_factor = b.log_power <= 0.0 ? std::pow(1.0 + lo, b.log_power)
                                               : std::pow(1.0 + hi, b.log_power);
  return b.coeff * r_pow * log_factor;
}

bool decays(const PowerLogBound& b, bool toward_zero, double p) {
  if (b.coeff == 0.0) return true;
  const double a = toward_zero ? b.power : -b.power;  // exponent of 2^{-|j|}
  if (a > 0.0) return true;
  if (a < 0.0) return false;
  if (std::isinf(p)) return b.log_power <= 0.0;
  return b.log_power * p < -1.0;
}

// Sum of annulus_bound^p over the |j| > far_index part of one side, using
// the far-side form only (ratio bound for geometric decay, integral bound
// for pure logarithmic decay).
double remainder(const PowerLogBound& b, bool toward_zero, double p, double last_term_p, int far_index) {
  if (b.coeff == 0.0) return 0.0;
  const double a = std::abs(b.power);
  const double bp = b.log_power * p;
  if (a > 0.0) {
    const double x = std::max(1, far_index);
    const double q = std::exp2(-a * p) * std::pow(1.0 + 1.0 / x, std::max(bp, 0.0));
    if (q >= 1.0) return INFINITY;
    return last_term_p * q / (1.0 - q);
  }
  (void)toward_zero;
  const double J = far_index - 1;
  return std::pow(b.coeff, p) * std::pow(1.0 + J * kLn2, bp + 1.0) / ((-bp - 1.0) * kLn2);
}

} // namespace

double RadialEnvelope::annulus_bound(int j) const {
  return j <= 0 ? form_bound(inner, j, true) : form_bound(outer, j, false);
}

std::optional<double> RadialEnvelope::tail(int j_min, int j_max, double p) const {
  if (!decays(inner, true, p) || !decays(outer, false, p)) return std::nullopt;
  if (std::exp2(j_min - 1) > inner_limit || std::exp2(j_max) < outer_limit) return std::nullopt;

  if (std::isinf(p)) {
    double sup = 0.0;
    for (int k = 0; k < kExplicitTerms; ++k) {
      sup = std::max(sup, annulus_bound(j_min - 1 - k));
      sup = std::max(sup, annulus_bound(j_max + 1 + k));
    }
    return sup;
  }

  double total = 0.0;
  double last_low = 0.0;
  double last_high = 0.0;
  for (int k = 0; k < kExplicitTerms; ++k) {
    last_low = std::pow(annulus_bound(j_min - 1 - k), p);
    last_high = std::pow(annulus_bound(j_max + 1 + k), p);
    total += last_low + last_high;
  }
  const int far_low = std::abs(j_min - kExplicitTerms);
  const int far_high = j_max + kExplicitTerms;
  total += remainder(inner, true, p, last_low, far_low);
  total += remainder(outer, false, p, last_high, far_high);
  if (!std::isfinite(total)) return std::nullopt;
  return std::pow(total, 1.0 / p);
}

} // namespace diracbs
