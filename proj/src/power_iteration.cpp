#include "diracbs/power_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace diracbs {

namespace {

double norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

} // namespace

PowerResult largest_singular_value(std::size_t dim, const LinearMap& op, const LinearMap& adjoint,
                                   const PowerOptions& opts) {
  if (!(opts.tol > 0.0)) throw ValidationError("power iteration tolerance must be positive");
  if (opts.restarts < 1 || opts.max_iterations < 1) throw ValidationError("power iteration needs restarts and iterations");
  PowerResult result;
  if (dim == 0) return result;

  std::vector<cplx> v(dim), kv(dim), w(dim);
  double best = 0.0;
  for (int r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss;
    for (auto& x : v) x = cplx(gauss(rng), gauss(rng));
    double nv = norm(v);
    for (auto& x : v) x /= nv;

    std::vector<double> history;
    double theta = 0.0;
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      op(v.data(), kv.data());
      adjoint(kv.data(), w.data());
      ++result.iterations;
      theta = 0.0;
      for (const auto& x : kv) theta += std::norm(x);
      history.push_back(theta);
      if (theta == 0.0) {
        converged = true;  // v in the kernel of a random start: T = 0 almost surely
        break;
      }
      double res = 0.0;
      for (std::size_t i = 0; i < dim; ++i) res += std::norm(w[i] - theta * v[i]);
      if (std::sqrt(res) <= opts.tol * theta) {
        converged = true;
        break;
      }
      const double nw = norm(w);
      for (std::size_t i = 0; i < dim; ++i) v[i] = w[i] / nw;
    }
    if (!converged) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "power iteration did not converge in " << opts.max_iterations
          << " iterations (restart " << r << "); last Rayleigh quotients:";
      const std::size_t from = history.size() > 8 ? history.size() - 8 : 0;
      for (std::size_t i = from; i < history.size(); ++i) msg << ' ' << history[i];
      throw ComputationError(msg.str());
    }
    result.rayleigh.push_back(theta);
    best = std::max(best, theta);
  }
  result.sigma = std::sqrt(best);
  return result;
}

} // namespace diracbs
