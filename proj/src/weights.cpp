#include "diracbs/weights.hpp"

#include <cmath>
#include <sstream>

#include "diracbs/types.hpp"

namespace diracbs {

namespace {

PowerLogBound raise(const PowerLogBound& b, double e) {
  return {std::pow(b.coeff, e), b.power * e, b.log_power * e};
}

RadialEnvelope raise(const RadialEnvelope& env, double e) {
  return {raise(env.inner, e), raise(env.outer, e), env.inner_limit, env.outer_limit};
}

} // namespace

WeightSpec WeightSpec::tau(double eps) {
  WeightSpec w;
  w.kind = Kind::tau;
  w.epsilon = eps;
  return w;
}

WeightSpec WeightSpec::w_sigma(double sigma) {
  WeightSpec w;
  w.kind = Kind::w_sigma;
  w.sigma = sigma;
  return w;
}

WeightSpec WeightSpec::rho1(double sigma) {
  WeightSpec w;
  w.kind = Kind::rho1;
  w.sigma = sigma;
  return w;
}

WeightSpec WeightSpec::rho2(double eps, double delta) {
  WeightSpec w;
  w.kind = Kind::rho2;
  w.epsilon = eps;
  w.delta = delta;
  return w;
}

WeightSpec WeightSpec::power(double exponent) {
  WeightSpec w;
  w.kind = Kind::power;
  w.exponent = exponent;
  return w;
}

WeightSpec WeightSpec::product(std::vector<WeightSpec> factors, double exponent) {
  WeightSpec w;
  w.kind = Kind::product;
  w.factors = std::move(factors);
  w.exponent = exponent;
  return w;
}

double WeightSpec::at_radius(double r) const {
  switch (kind) {
    case Kind::tau: return std::pow(r, 0.5 - epsilon) + r;
    case Kind::w_sigma: return r * std::pow(1.0 + std::abs(std::log(r)), sigma);
    case Kind::rho1: return std::pow(1.0 + std::abs(std::log(r)), -0.5 * sigma);
    case Kind::rho2: return 1.0 / (std::pow(r, -epsilon) + std::pow(r, delta));
    case Kind::power: return std::pow(r, exponent);
    case Kind::product: {
      double v = 1.0;
      for (const auto& f : factors) v *= f.at_radius(r);
      return std::pow(v, exponent);
    }
  }
  return 0.0;
}

RadialEnvelope WeightSpec::envelope(double r_in, double r_out) const {
  if (!(r_in > 0.0 && r_in <= 1.0 && r_out >= 1.0)) throw ValidationError("envelope limits need 0 < r_in <= 1 <= r_out");
  switch (kind) {
    case Kind::tau: {
      // r^a + r <= (1 + r_in^{1-a}) r^a below r_in, <= (1 + r_out^{a-1}) r above r_out
      const double a = 0.5 - epsilon;
      return {{1.0 + std::pow(r_in, 1.0 - a), a, 0.0}, {1.0 + std::pow(r_out, a - 1.0), 1.0, 0.0}, r_in, r_out};
    }
    case Kind::w_sigma: return {{1.0, 1.0, sigma}, {1.0, 1.0, sigma}};
    case Kind::rho1: return {{1.0, 0.0, -0.5 * sigma}, {1.0, 0.0, -0.5 * sigma}};
    case Kind::rho2: return {{1.0, epsilon, 0.0}, {1.0, -delta, 0.0}};
    case Kind::power: return RadialEnvelope::power(exponent);
    case Kind::product: {
      RadialEnvelope env = RadialEnvelope::constant(1.0);
      for (const auto& f : factors)
        env = env * (exponent >= 0.0 ? f.envelope(r_in, r_out) : f.minorant(r_in, r_out));
      return raise(env, exponent);
    }
  }
  return RadialEnvelope::constant(0.0);
}

RadialEnvelope WeightSpec::minorant(double r_in, double r_out) const {
  if (!(r_in > 0.0 && r_in <= 1.0 && r_out >= 1.0)) throw ValidationError("envelope limits need 0 < r_in <= 1 <= r_out");
  switch (kind) {
    case Kind::tau: return {{1.0, 0.5 - epsilon, 0.0}, {1.0, 1.0, 0.0}, r_in, r_out};
    case Kind::rho2: {
      // 1/(r^-e + r^d) = r^e / (1 + r^{e+d}) = r^-d / (1 + r^{-e-d})
      const double s = epsilon + delta;
      return {{1.0 / (1.0 + std::pow(r_in, s)), epsilon, 0.0}, {1.0 / (1.0 + std::pow(r_out, -s)), -delta, 0.0}, r_in,
              r_out};
    }
    case Kind::w_sigma:
    case Kind::rho1:
    case Kind::power: return envelope(r_in, r_out);
    case Kind::product: {
      RadialEnvelope env = RadialEnvelope::constant(1.0);
      for (const auto& f : factors)
        env = env * (exponent >= 0.0 ? f.minorant(r_in, r_out) : f.envelope(r_in, r_out));
      return raise(env, exponent);
    }
  }
  return RadialEnvelope::constant(0.0);
}

std::string WeightSpec::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::tau: os << "tau(eps=" << epsilon << ")"; break;
    case Kind::w_sigma: os << "w_sigma(sigma=" << sigma << ")"; break;
    case Kind::rho1: os << "rho1(sigma=" << sigma << ")"; break;
    case Kind::rho2: os << "rho2(eps=" << epsilon << ",delta=" << delta << ")"; break;
    case Kind::power: os << "|x|^" << exponent; break;
    case Kind::product: {
      os << "(";
      for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i].describe();
      os << ")^" << exponent;
      break;
    }
  }
  return os.str();
}

double weight_eval(const WeightSpec& w, std::span<const double> x) {
  double r2 = 0.0;
  for (double c : x) r2 += c * c;
  if (r2 == 0.0) throw DomainError("weight " + w.describe() + " is not defined at x = 0");
  return w.at_radius(std::sqrt(r2));
}

std::string to_string(WeightSpec::Kind kind) {
  switch (kind) {
    case WeightSpec::Kind::tau: return "tau";
    case WeightSpec::Kind::w_sigma: return "w_sigma";
    case WeightSpec::Kind::rho1: return "rho1";
    case WeightSpec::Kind::rho2: return "rho2";
    case WeightSpec::Kind::power: return "power";
    case WeightSpec::Kind::product: return "product";
  }
  return "?";
}

WeightSpec::Kind weight_kind_from_string(const std::string& name) {
  for (auto k : {WeightSpec::Kind::tau, WeightSpec::Kind::w_sigma, WeightSpec::Kind::rho1,
                 WeightSpec::Kind::rho2, WeightSpec::Kind::power, WeightSpec::Kind::product}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown weight kind '" + name + "'");
}

} // namespace diracbs
