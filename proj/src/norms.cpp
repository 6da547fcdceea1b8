#include "diracbs/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

namespace diracbs {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kTopT = 1.0 - 1e-12;  // annuli are half-open: sample up to just below 2^j
constexpr double kLowT = 1e-12;        // and just above 2^{j-1}, clear of rounding at the boundary
constexpr int kRadialNodes = 20;
constexpr int kAngularNodes = 12;

struct GaussRule {
  std::vector<double> x;  // on [-1, 1]
  std::vector<double> w;
};

template <int Order>
GaussRule gauss_rule() {
  using G = boost::math::quadrature::gauss<double, Order>;
  GaussRule rule;
  const auto& a = G::abscissa();
  const auto& wt = G::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      rule.x.push_back(0.0);
      rule.w.push_back(wt[i]);
    } else {
      rule.x.push_back(a[i]);
      rule.w.push_back(wt[i]);
      rule.x.push_back(-a[i]);
      rule.w.push_back(wt[i]);
    }
  }
  return rule;
}

const GaussRule& radial_rule() {
  static const GaussRule rule = gauss_rule<kRadialNodes>();
  return rule;
}

const GaussRule& angular_rule() {
  static const GaussRule rule = gauss_rule<kAngularNodes>();
  return rule;
}

std::vector<std::vector<double>> directions(int n, int count) {
  std::vector<std::vector<double>> dirs;
  if (n == 1) return {{1.0}, {-1.0}};
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double phi = 2.0 * M_PI * i / count;
      dirs.push_back({std::cos(phi), std::sin(phi)});
    }
    return dirs;
  }
  if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      dirs.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return dirs;
  }
  std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(n));
  std::normal_distribution<double> gauss;
  for (int i = 0; i < count * (n - 2); ++i) {
    std::vector<double> d(static_cast<std::size_t>(n));
    double s = 0.0;
    for (auto& c : d) {
      c = gauss(rng);
      s += c * c;
    }
    for (auto& c : d) c /= std::sqrt(s);
    dirs.push_back(std::move(d));
  }
  return dirs;
}

struct Probe {
  double value = 0.0;
  double t = 0.0;
  std::vector<double> dir;
};

class AnnulusSampler {
public:
  AnnulusSampler(const ScalarField& f, int n, int j) : f_(f), n_(n), a_(std::exp2(j - 1)), x_(static_cast<std::size_t>(n)) {}

  double eval(double t, const std::vector<double>& dir) {
    t = std::clamp(t, kLowT, kTopT);
    const double r = a_ * std::exp2(t);
    for (int k = 0; k < n_; ++k) x_[static_cast<std::size_t>(k)] = r * dir[static_cast<std::size_t>(k)];
    ++count_;
    return std::abs(f_(x_));
  }

  std::size_t count() const { return count_; }
  double inner() const { return a_; }

private:
  const ScalarField& f_;
  int n_;
  double a_;
  std::vector<double> x_;
  std::size_t count_ = 0;
};

std::vector<double> perturb(const std::vector<double>& d, int axis, double step) {
  std::vector<double> out = d;
  // remove the normal component of the axis vector, then step along it
  const double dot = d[static_cast<std::size_t>(axis)];
  double s = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double e = (static_cast<int>(k) == axis ? 1.0 : 0.0) - dot * d[k];
    out[k] += step * e;
    s += out[k] * out[k];
  }
  for (auto& c : out) c /= std::sqrt(s);
  return out;
}

double annulus_sup(const ScalarField& f, int n, int j, const SamplingOptions& opts, std::size_t& samples) {
  AnnulusSampler sampler(f, n, j);
  const auto dirs = directions(n, opts.angular);
  const int radial = std::max(2, opts.radial);

  std::vector<Probe> top;
  const auto keep = static_cast<std::size_t>(std::max(1, opts.refine_top));
  auto offer = [&](double v, double t, const std::vector<double>& d) {
    if (top.size() < keep || v > top.back().value) {
      top.push_back({v, t, d});
      std::sort(top.begin(), top.end(), [](const Probe& a, const Probe& b) { return a.value > b.value; });
      if (top.size() > keep) top.pop_back();
    }
  };

  for (int k = 0; k < radial; ++k) {
    const double t = kTopT * k / (radial - 1);
    for (const auto& d : dirs) offer(sampler.eval(t, d), t, d);
  }

  double dt = 1.0 / (radial - 1);
  double da = n == 1 ? 0.0 : (n == 2 ? 2.0 * M_PI / opts.angular : std::sqrt(4.0 * M_PI / opts.angular));
  for (int round = 0; round < opts.refine_rounds; ++round) {
    dt *= 0.5;
    da *= 0.5;
    const auto centers = top;
    for (const auto& c : centers) {
      for (double s : {-1.0, 1.0}) {
        const double t = std::clamp(c.t + s * dt, 0.0, kTopT);
        offer(sampler.eval(t, c.dir), t, c.dir);
      }
      if (n >= 2) {
        for (int axis = 0; axis < n; ++axis) {
          for (double s : {-1.0, 1.0}) {
            auto d = perturb(c.dir, axis, s * da);
            offer(sampler.eval(c.t, d), c.t, d);
          }
        }
      }
    }
  }
  samples = sampler.count();
  return top.empty() ? 0.0 : top.front().value;
}

// Integral of f^2 over the unit sphere scaled to radius r.
double sphere_integral(const ScalarField& f, int n, double r, std::vector<double>& x, std::size_t& samples) {
  if (n == 1) {
    x[0] = r;
    const double a = f(x);
    x[0] = -r;
    const double b = f(x);
    samples += 2;
    return a * a + b * b;
  }
  const int phi_nodes = 2 * kAngularNodes;
  const auto& rule = angular_rule();
  const int polar = n - 2;
  std::vector<std::size_t> idx(static_cast<std::size_t>(polar), 0);
  double total = 0.0;
  while (true) {
    double weight = 1.0;
    double sin_prod = 1.0;
    for (int k = 0; k < polar; ++k) {
      const double theta = 0.5 * M_PI * (rule.x[idx[static_cast<std::size_t>(k)]] + 1.0);
      weight *= 0.5 * M_PI * rule.w[idx[static_cast<std::size_t>(k)]] * std::pow(std::sin(theta), n - 2 - k);
      x[static_cast<std::size_t>(k)] = r * sin_prod * std::cos(theta);
      sin_prod *= std::sin(theta);
    }
    for (int i = 0; i < phi_nodes; ++i) {
      const double phi = 2.0 * M_PI * (i + 0.5) / phi_nodes;
      x[static_cast<std::size_t>(n - 2)] = r * sin_prod * std::cos(phi);
      x[static_cast<std::size_t>(n - 1)] = r * sin_prod * std::sin(phi);
      const double v = f(x);
      total += weight * (2.0 * M_PI / phi_nodes) * v * v;
      ++samples;
    }
    int k = polar - 1;
    while (k >= 0) {
      if (++idx[static_cast<std::size_t>(k)] < rule.x.size()) break;
      idx[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) break;
  }
  return total;
}

double annulus_l2(const ScalarField& f, int n, int j, std::size_t& samples) {
  const double a = std::exp2(j - 1);
  const auto& rule = radial_rule();
  std::vector<double> x(static_cast<std::size_t>(n));
  double total = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    const double t = 0.5 * (rule.x[i] + 1.0);
    const double r = a * std::exp2(t);
    // dr = r ln2 dt, volume element r^{n-1} dr
    total += 0.5 * rule.w[i] * std::pow(r, n) * kLn2 * sphere_integral(f, n, r, x, samples);
  }
  return std::sqrt(total);
}

bool grows_outward(const std::vector<double>& terms, bool at_low_end, bool strict) {
  if (terms.size() < 3) return false;
  const std::size_t e = at_low_end ? 0 : terms.size() - 1;
  const std::size_t e1 = at_low_end ? 1 : terms.size() - 2;
  const std::size_t e2 = at_low_end ? 2 : terms.size() - 3;
  if (!(terms[e] > 0.0)) return false;
  if (strict) return terms[e] > terms[e1] * (1.0 + 1e-6) && terms[e1] > terms[e2] * (1.0 + 1e-6);
  return terms[e] >= terms[e1] * (1.0 - 1e-9) && terms[e1] >= terms[e2] * (1.0 - 1e-9);
}

RadialEnvelope lq_envelope(const RadialEnvelope& sup_env, int n, double q) {
  if (std::isinf(q)) return sup_env;
  // ||f||_{L^2(A_j)} <= sup_{A_j} f * vol(A_j)^{1/2}, vol(A_j) <= |S^{n-1}|/n * r^n (2^n - 1) for r in A_j
  const double c = std::sqrt(unit_sphere_area(n) / n * (std::exp2(n) - 1.0));
  return sup_env * RadialEnvelope::constant(c) * RadialEnvelope::power(0.5 * n);
}

} // namespace

double unit_sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

int annulus_index(double r) { return static_cast<int>(std::floor(std::log2(r))) + 1; }

std::optional<double> NormResult::upper_bound() const {
  if (divergent || !tail_bound) return std::nullopt;
  if (std::isinf(p)) return std::max(value, *tail_bound);
  return std::pow(std::pow(value, p) + std::pow(*tail_bound, p), 1.0 / p);
}

std::size_t NormResult::total_samples() const {
  return std::accumulate(samples_per_annulus.begin(), samples_per_annulus.end(), std::size_t{0});
}

NormResult dyadic_norm(const ScalarField& f, int n, double p, double q, DyadicRange range,
                       std::optional<RadialEnvelope> envelope, const SamplingOptions& opts) {
  if (n < 1) throw ValidationError("dimension must be >= 1");
  if (!(p == 1.0 || p == 2.0 || std::isinf(p))) throw ValidationError("dyadic norm exponent p must be 1, 2 or inf");
  if (!(q == 2.0 || std::isinf(q))) throw ValidationError("dyadic norm exponent q must be 2 or inf");
  if (range.j_min > range.j_max) throw ValidationError("empty dyadic range");

  NormResult res;
  res.p = p;
  res.q = q;
  res.j_min = range.j_min;
  res.j_max = range.j_max;
  for (int j = range.j_min; j <= range.j_max; ++j) {
    std::size_t samples = 0;
    const double v = std::isinf(q) ? annulus_sup(f, n, j, opts, samples) : annulus_l2(f, n, j, samples);
    res.per_annulus.push_back(v);
    res.samples_per_annulus.push_back(samples);
  }

  const bool strict = std::isinf(p);
  res.divergent = grows_outward(res.per_annulus, true, strict) || grows_outward(res.per_annulus, false, strict);
  if (res.divergent) {
    res.value = kInf;
    return res;
  }
  if (std::isinf(p)) {
    res.value = *std::max_element(res.per_annulus.begin(), res.per_annulus.end());
  } else {
    double s = 0.0;
    for (double v : res.per_annulus) s += std::pow(v, p);
    res.value = std::pow(s, 1.0 / p);
  }
  if (envelope) res.tail_bound = lq_envelope(*envelope, n, q).tail(range.j_min, range.j_max, p);
  return res;
}

NormResult weighted_sup_norm(const ScalarField& f, int n, const WeightSpec& w, std::optional<RadialEnvelope> f_envelope,
                             DyadicRange range, const SamplingOptions& opts) {
  std::optional<RadialEnvelope> env;
  if (f_envelope)
    env = w.envelope(std::min(1.0, std::exp2(range.j_min - 1)), std::max(1.0, std::exp2(range.j_max))) * *f_envelope;
  return weighted_sup_norm(f, n, weight_field(w), env, range, opts);
}

NormResult weighted_sup_norm(const ScalarField& f, int n, const ScalarField& w,
                             std::optional<RadialEnvelope> product_envelope, DyadicRange range,
                             const SamplingOptions& opts) {
  ScalarField product = [&f, &w](std::span<const double> x) { return w(x) * f(x); };
  return dyadic_norm(product, n, kInf, kInf, range, product_envelope, opts);
}

ScalarField opnorm_field(const PotentialSpec& V) {
  return [V](std::span<const double> x) { return V.opnorm(x); };
}

ScalarField weight_field(const WeightSpec& w) {
  return [w](std::span<const double> x) { return weight_eval(w, x); };
}

// ---------------------------------------------------------------------------

GridGeometry::GridGeometry(const GridSpec& grid) : grid_(grid) {
  grid_.validate();
  const std::size_t P = grid_.points();
  radius_.resize(P);
  annulus_.resize(P);
  shell_.resize(P);
  const double h = grid_.spacing();
  complete_shells_ = static_cast<int>(std::floor(grid_.L / h + 1e-12));
  std::vector<double> shell_sum(static_cast<std::size_t>(complete_shells_), 0.0);
  std::vector<int> shell_count(static_cast<std::size_t>(complete_shells_), 0);
  annulus_min_ = std::numeric_limits<int>::max();
  annulus_max_ = std::numeric_limits<int>::min();
  for (std::size_t p = 0; p < P; ++p) {
    const double r = grid_.radius(p);
    radius_[p] = r;
    annulus_[p] = annulus_index(r);
    const int s = static_cast<int>(std::floor(r / h));
    shell_[p] = s < complete_shells_ ? s : -1;
    if (shell_[p] >= 0) {
      shell_sum[static_cast<std::size_t>(s)] += r;
      shell_count[static_cast<std::size_t>(s)] += 1;
    }
    if (r < grid_.L) {
      by_radius_.push_back(p);
      annulus_min_ = std::min(annulus_min_, annulus_[p]);
      annulus_max_ = std::max(annulus_max_, annulus_[p]);
    }
  }
  std::stable_sort(by_radius_.begin(), by_radius_.end(), [this](std::size_t a, std::size_t b) { return radius_[a] < radius_[b]; });
  shell_radius_.resize(static_cast<std::size_t>(complete_shells_));
  for (int s = 0; s < complete_shells_; ++s) {
    const auto k = static_cast<std::size_t>(s);
    shell_radius_[k] = shell_count[k] > 0 ? shell_sum[k] / shell_count[k] : (s + 0.5) * h;
  }
  if (by_radius_.empty()) throw ValidationError("grid has no samples inside the inscribed ball |x| < L");
}

std::vector<double> density(const FieldOnGrid& u) {
  std::vector<double> d(u.grid.points());
  for (std::size_t p = 0; p < d.size(); ++p) d[p] = u.pointwise_norm2(p);
  return d;
}

std::vector<double> weighted_density(const GridGeometry& geom, std::span<const double> dens, const WeightSpec& w) {
  std::vector<double> out(dens.size());
  for (std::size_t p = 0; p < dens.size(); ++p) {
    const double v = w.at_radius(geom.radius(p));
    out[p] = dens[p] * v * v;
  }
  return out;
}

double grid_l2(const GridGeometry& geom, std::span<const double> dens) {
  double s = 0.0;
  for (std::size_t p : geom.by_radius()) s += dens[p];
  return std::sqrt(s * geom.grid().cell_volume());
}

double grid_dyadic_l2(const GridGeometry& geom, std::span<const double> dens, double p) {
  const int lo = geom.annulus_min();
  std::vector<double> sums(static_cast<std::size_t>(geom.annulus_max() - lo + 1), 0.0);
  for (std::size_t k : geom.by_radius()) sums[static_cast<std::size_t>(geom.annulus(k) - lo)] += dens[k];
  const double vol = geom.grid().cell_volume();
  double acc = 0.0;
  for (double s : sums) {
    const double v = std::sqrt(s * vol);
    if (std::isinf(p)) acc = std::max(acc, v);
    else acc += std::pow(v, p);
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

double grid_morrey_x(const GridGeometry& geom, std::span<const double> dens) {
  const int shells = geom.complete_shells();
  if (shells < 1) throw ValidationError("grid too coarse: no complete radial shell inside the box");
  std::vector<double> sums(static_cast<std::size_t>(shells), 0.0);
  for (std::size_t p : geom.by_radius()) {
    const int s = geom.shell(p);
    if (s >= 0) sums[static_cast<std::size_t>(s)] += dens[p];
  }
  const double h = geom.grid().spacing();
  const double vol = geom.grid().cell_volume();
  double best = 0.0;
  for (int s = 0; s < shells; ++s) {
    const double R = geom.shell_radius(s);
    const double surface = sums[static_cast<std::size_t>(s)] * vol / h;
    best = std::max(best, surface / (R * R));
  }
  return std::sqrt(best);
}

double grid_morrey_y(const GridGeometry& geom, std::span<const double> dens) {
  const double vol = geom.grid().cell_volume();
  double cum = 0.0;
  double best = 0.0;
  const auto& order = geom.by_radius();
  for (std::size_t i = 0; i < order.size(); ++i) {
    cum += dens[order[i]] * vol;
    // ball B_R with R = current radius contains every point up to ties
    if (i + 1 == order.size() || geom.radius(order[i + 1]) > geom.radius(order[i]))
      best = std::max(best, cum / geom.radius(order[i]));
  }
  return std::sqrt(best);
}

MorreyNorms morrey_norms(const GridGeometry& geom, std::span<const double> dens) {
  MorreyNorms out;
  out.X = grid_morrey_x(geom, dens);
  out.Y = grid_morrey_y(geom, dens);
  out.Ystar_dyadic = grid_dyadic_l2(geom, weighted_density(geom, dens, WeightSpec::power(0.5)), 1.0);
  return out;
}

MorreyNorms morrey_norms(const FieldOnGrid& u) {
  const GridGeometry geom(u.grid);
  const auto d = density(u);
  return morrey_norms(geom, d);
}

} // namespace diracbs
