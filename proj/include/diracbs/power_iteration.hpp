#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// y = T x for vectors of a fixed dimension.
using LinearMap = std::function<void(const cplx* x, cplx* y)>;

struct PowerOptions {
  double tol = 1e-4;
  int max_iterations = 20000;
  int restarts = 3;
  std::uint64_t seed = 0x5eed;
};

struct PowerResult {
  double sigma = 0.0;       // largest singular value estimate
  int iterations = 0;       // summed over restarts
  std::vector<double> rayleigh;  // final Rayleigh quotient of each restart
};

/// Largest singular value of T by power iteration on T^* T. Each restart
/// starts from a seeded Gaussian vector and stops once
/// ||T^*T v - theta v|| <= tol * theta; the largest restart wins.
/// Throws ComputationError with the Rayleigh-quotient history when a restart
/// does not converge.
PowerResult largest_singular_value(std::size_t dim, const LinearMap& op, const LinearMap& adjoint,
                                   const PowerOptions& opts = {});

} // namespace diracbs
