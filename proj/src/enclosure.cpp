#include "diracbs/enclosure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diracbs/hash.hpp"

namespace diracbs {

namespace {

void require_dimension(int n) {
  if (n < 3) throw DomainError("unsupported dimension n = " + std::to_string(n) + ": the estimates need n >= 3");
}

NormEntry entry(const std::string& name, const NormResult& r) {
  NormEntry e;
  e.name = name;
  e.value = r.value;
  e.tail_bound = r.tail_bound;
  e.upper_bound = r.upper_bound();
  e.divergent = r.divergent;
  e.samples = r.total_samples();
  return e;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

WeightSpec tau_squared(double eps) { return WeightSpec::product({WeightSpec::tau(eps)}, 2.0); }

WeightSpec rho_condition_weight(const WeightSpec& rho) {
  return WeightSpec::product({WeightSpec::power(1.0), WeightSpec::product({rho}, -2.0)});
}

double C2(int n) {
  require_dimension(n);
  return 576.0 * n * std::max(std::sqrt(static_cast<double>(n)), std::pow(64.0 * n + 324.0, 0.25));
}

double kato_yajima(int n) {
  require_dimension(n);
  return std::sqrt(M_PI / (2.0 * (n - 2)));
}

double dirac_bracket(cplx z, double m) {
  const double s = z.real() >= 0.0 ? 1.0 : -1.0;
  const double ratio = std::abs(z + m) / std::abs(z - m);
  return 1.0 + std::pow(ratio, 0.5 * s);
}

double japanese_bracket(cplx z) { return std::sqrt(1.0 + std::norm(z)); }

RhoNorms rho_norms(const WeightSpec& rho, int n, DyadicRange range, const SamplingOptions& opts) {
  const double r_in = std::min(1.0, std::exp2(range.j_min - 1));
  const double r_out = std::max(1.0, std::exp2(range.j_max));
  RhoNorms out;
  const NormResult l2 = dyadic_norm(weight_field(rho), n, 2.0, kInf, range, rho.envelope(r_in, r_out), opts);
  out.l2_linf = l2.upper_bound().value_or(kInf);
  const WeightSpec half = WeightSpec::product({WeightSpec::power(0.5), rho});
  const NormResult sup = dyadic_norm(weight_field(half), n, kInf, kInf, range, half.envelope(r_in, r_out), opts);
  out.half_power_sup = sup.upper_bound().value_or(kInf);
  return out;
}

ConstantsReport eval_constants(int n, double m, const RhoNorms& rho) {
  require_dimension(n);
  if (!(m >= 0.0) || !std::isfinite(m)) throw ValidationError("mass must be finite and >= 0");
  if (!(rho.l2_linf > 0.0) || !std::isfinite(rho.l2_linf))
    throw ValidationError("||rho||_{l^2 L^inf} must be finite and positive");
  const bool half_finite = rho.half_power_sup > 0.0 && std::isfinite(rho.half_power_sup);
  if (m > 0.0 && !half_finite) throw ValidationError("m > 0 needs a finite || |x|^{1/2} rho ||_{L^inf}");

  ConstantsReport r;
  r.n = n;
  r.m = m;
  r.rho = rho;
  r.C2 = C2(n);
  r.kato_yajima = kato_yajima(n);
  const double rho2 = rho.l2_linf * rho.l2_linf;
  const double root4 = std::pow(64.0 * n + 324.0, 0.25);
  if (half_finite) {
    const double half2 = rho.half_power_sup * rho.half_power_sup;
    r.C3 = 576.0 * n * root4 * rho2 + r.kato_yajima * half2;
  }
  if (m == 0.0) {
    r.C1 = 2.0 * r.C2 * rho2;
  } else {
    const double half2 = rho.half_power_sup * rho.half_power_sup;
    r.C1 = 576.0 * n * (std::sqrt(static_cast<double>(n)) + (2.0 * m + 1.0) * root4) * rho2 +
           (2.0 * m + 1.0) * r.kato_yajima * half2;
  }
  return r;
}

bool DiskPair::contains(cplx z, double slack) const {
  const double lim = r0 + slack;
  return std::abs(z - x0_plus) <= lim || std::abs(z - x0_minus) <= lim;
}

DiskPair disk_pair(double m, double N_j, double C2value, int j) {
  if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("disks need a mass m > 0");
  if (j != 1 && j != 2) throw ValidationError("disk index j must be 1 or 2");
  if (!(N_j >= 0.0) || !(C2value > 0.0)) throw ValidationError("disks need N_j >= 0 and C2 > 0");
  if (!(2.0 * C2value * N_j < 1.0)) throw ValidationError("disks need 2 C2 N_j < 1, got " + fmt(2.0 * C2value * N_j));
  DiskPair d;
  d.j = j;
  d.m = m;
  d.N_j = N_j;
  d.C2 = C2value;
  // t = 1/V_j = (C2 N / (1 - C2 N))^2 keeps N_j -> 0 finite
  const double cn = C2value * N_j;
  const double t = std::pow(cn / (1.0 - cn), 2.0);
  d.V_j = t == 0.0 ? kInf : 1.0 / t;
  const double denom = 1.0 - t * t;
  d.x0_plus = m * (1.0 + t * t) / denom;
  d.x0_minus = -d.x0_plus;
  d.r0 = 2.0 * m * t / denom;
  return d;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::enclosure: return "enclosure";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string CertifyParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "m=" << m << ";eps=" << epsilon << ";sigma=" << sigma << ";rho=" << rho.describe() << ";j=[" << range.j_min
     << "," << range.j_max << "];sampling=" << sampling.radial << "," << sampling.angular << ","
     << sampling.refine_rounds << "," << sampling.refine_top;
  return os.str();
}

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"2.1", "2.2-massless", "2.2-massive", "2.3", "2.4", "2.5-j1", "2.5-j2"};
  return ids;
}

NormEntry weighted_potential_sup(const PotentialSpec& V, const WeightSpec& w, const std::string& name,
                                 DyadicRange range, const SamplingOptions& opts) {
  return entry(name, weighted_sup_norm(opnorm_field(V), V.dimension(), w, V.envelope(), range, opts));
}

NormEntry n1_norm(const PotentialSpec& V, DyadicRange range, const SamplingOptions& opts) {
  ScalarField f = [V](std::span<const double> x) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return std::sqrt(r2) * V.opnorm(x);
  };
  return entry("N1", dyadic_norm(f, V.dimension(), 1.0, kInf, range, RadialEnvelope::power(1.0) * V.envelope(), opts));
}

namespace {

Certificate base_certificate(const std::string& theorem, const PotentialSpec& V, const CertifyParams& params) {
  require_dimension(V.dimension());
  Certificate c;
  c.theorem = theorem;
  c.input_hash = hash_hex(theorem + "|" + V.describe() + "|" + params.describe());
  return c;
}

/// Applies the rule constant * upper_bound < 1 and fills the certificate.
void decide(Certificate& c, double constant, const NormEntry& norm, Verdict on_success) {
  c.constant = constant;
  c.threshold = 1.0 / constant;
  if (norm.divergent) {
    c.notes.push_back(norm.name + " diverges over the dyadic range");
    return;
  }
  if (!norm.upper_bound) {
    c.notes.push_back(norm.name + " has no tail bound outside the sampled annuli");
    return;
  }
  c.product = constant * *norm.upper_bound;
  if (*c.product < 1.0) {
    c.verdict = on_success;
  } else {
    c.notes.push_back("smallness condition not met: constant * norm = " + fmt(*c.product) + " >= 1");
  }
}

Certificate qualitative(const std::string& theorem, const PotentialSpec& V, const CertifyParams& params,
                        const WeightSpec& w, const std::string& name) {
  Certificate c = base_certificate(theorem, V, params);
  c.norms.push_back(weighted_potential_sup(V, w, name, params.range, params.sampling));
  c.notes.push_back("the smallness constant of this theorem is not explicit; norm reported without a verdict");
  return c;
}

} // namespace

Certificate certify(const std::string& theorem, const PotentialSpec& V, const CertifyParams& params) {
  if (theorem == "2.1") {
    if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    return qualitative(theorem, V, params, tau_squared(params.epsilon), "tau_eps^2 V sup");
  }
  if (theorem == "2.2-massless") {
    if (!(params.sigma > 1.0)) throw ValidationError("sigma must exceed 1");
    return qualitative(theorem, V, params, WeightSpec::w_sigma(params.sigma), "w_sigma V sup");
  }
  if (theorem == "2.2-massive") {
    if (!(params.m > 0.0)) throw ValidationError("theorem 2.2-massive needs m > 0");
    if (!(params.epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    return qualitative(theorem, V, params, tau_squared(params.epsilon), "tau_eps^2 V sup");
  }
  if (theorem == "2.3") {
    Certificate c = base_certificate(theorem, V, params);
    const RhoNorms rho = rho_norms(params.rho, V.dimension(), params.range, params.sampling);
    if (!std::isfinite(rho.l2_linf) || (params.m > 0.0 && !std::isfinite(rho.half_power_sup))) {
      c.notes.push_back("rho norms are not finite for this weight");
      return c;
    }
    c.constants = eval_constants(V.dimension(), params.m, rho);
    const NormEntry norm = weighted_potential_sup(V, rho_condition_weight(params.rho), "|x| rho^-2 V sup",
                                                  params.range, params.sampling);
    c.norms.push_back(norm);
    decide(c, c.constants->C1, norm, Verdict::stable);
    return c;
  }
  if (theorem == "2.4") {
    if (params.m != 0.0) throw ValidationError("theorem 2.4 is the massless case; set m = 0");
    Certificate c = base_certificate(theorem, V, params);
    const NormEntry norm = n1_norm(V, params.range, params.sampling);
    c.norms.push_back(norm);
    decide(c, 2.0 * C2(V.dimension()), norm, Verdict::stable);
    return c;
  }
  if (theorem == "2.5-j1") return enclosure_disks(V, params.m, 1, params);
  if (theorem == "2.5-j2") return enclosure_disks(V, params.m, 2, params);
  throw ValidationError("unknown theorem id '" + theorem + "'");
}

Certificate enclosure_disks(const PotentialSpec& V, double m, int j, const CertifyParams& params) {
  if (!(m > 0.0)) throw ValidationError("enclosure disks need m > 0");
  if (j != 1 && j != 2) throw ValidationError("disk index j must be 1 or 2");
  Certificate c = base_certificate(j == 1 ? "2.5-j1" : "2.5-j2", V, params);
  const double c2 = C2(V.dimension());
  NormEntry norm;
  if (j == 1) {
    norm = n1_norm(V, params.range, params.sampling);
  } else {
    const RhoNorms rho = rho_norms(params.rho, V.dimension(), params.range, params.sampling);
    const NormEntry sup = weighted_potential_sup(V, rho_condition_weight(params.rho), "|x| rho^-2 V sup",
                                                 params.range, params.sampling);
    c.norms.push_back(sup);
    norm.name = "N2";
    norm.divergent = sup.divergent;
    norm.samples = sup.samples;
    const double r2 = rho.l2_linf * rho.l2_linf;
    norm.value = r2 * sup.value;
    if (sup.upper_bound && std::isfinite(rho.l2_linf)) norm.upper_bound = r2 * *sup.upper_bound;
    if (sup.tail_bound) norm.tail_bound = r2 * *sup.tail_bound;
    if (!std::isfinite(rho.l2_linf)) c.notes.push_back("||rho||_{l^2 L^inf} is not finite");
  }
  c.norms.push_back(norm);
  decide(c, 2.0 * c2, norm, Verdict::enclosure);
  if (c.verdict == Verdict::enclosure) c.disks = disk_pair(m, *norm.upper_bound, c2, j);
  return c;
}

} // namespace diracbs
