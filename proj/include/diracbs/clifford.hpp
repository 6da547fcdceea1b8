#pragma once

#include <span>
#include <vector>

#include "diracbs/types.hpp"

namespace diracbs {

/// Anticommuting Hermitian unitaries alpha_0..alpha_n of size N = 2^ceil(n/2).
///
/// Built by the iterated Pauli tensor construction: for p = ceil(n/2) qubit
/// slots the 2p+1 generators
///   gamma_{2k}   = Z x .. x Z x X x I x .. x I
///   gamma_{2k+1} = Z x .. x Z x Y x I x .. x I     (k Z-factors in front)
///   gamma_{2p}   = Z x .. x Z
/// pairwise anticommute. alpha_1..alpha_n are gamma_0..gamma_{n-1} and the
/// mass matrix alpha_0 is gamma_n (the first unused generator; for even n that
/// is the all-Z product).
struct CliffordRep {
  int n = 0;
  int N = 0;
  std::vector<CMatrix> alphas;  // alphas[0] mass matrix, alphas[1..n] kinetic

  const CMatrix& mass() const { return alphas[0]; }
  const CMatrix& kinetic(int k) const { return alphas[static_cast<std::size_t>(k)]; }

  /// Dirac symbol sum_k alpha_k xi_k + m alpha_0.
  CMatrix symbol(std::span<const double> xi, double m) const;
};

/// Spinor size 2^ceil(n/2).
int spinor_size(int n);

CliffordRep build_clifford(int n);

/// max_{j,k} max_entry |alpha_j alpha_k + alpha_k alpha_j - 2 delta_jk I|.
double anticommutator_defect(const CliffordRep& rep);

} // namespace diracbs
