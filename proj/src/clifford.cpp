#include "diracbs/clifford.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace diracbs {

namespace {

CMatrix pauli(char which) {
  CMatrix s(2, 2);
  const cplx i(0.0, 1.0);
  switch (which) {
    case 'X': s << 0.0, 1.0, 1.0, 0.0; break;
    case 'Y': s << 0.0, -i, i, 0.0; break;
    case 'Z': s << 1.0, 0.0, 0.0, -1.0; break;
    default: s = CMatrix::Identity(2, 2); break;
  }
  return s;
}

CMatrix tensor(const std::vector<char>& slots) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (char c : slots) {
    CMatrix next = Eigen::kroneckerProduct(out, pauli(c)).eval();
    out = std::move(next);
  }
  return out;
}

} // namespace

int spinor_size(int n) {
  if (n < 1) throw ValidationError("spatial dimension must be >= 1, got " + std::to_string(n));
  return 1 << ((n + 1) / 2);
}

CliffordRep build_clifford(int n) {
  const int N = spinor_size(n);
  const int slots = (n + 1) / 2;

  std::vector<CMatrix> gammas;
  gammas.reserve(static_cast<std::size_t>(2 * slots + 1));
  for (int k = 0; k < slots; ++k) {
    for (char c : {'X', 'Y'}) {
      std::vector<char> s(static_cast<std::size_t>(slots), 'I');
      for (int q = 0; q < k; ++q) s[static_cast<std::size_t>(q)] = 'Z';
      s[static_cast<std::size_t>(k)] = c;
      gammas.push_back(tensor(s));
    }
  }
  gammas.push_back(tensor(std::vector<char>(static_cast<std::size_t>(slots), 'Z')));

  CliffordRep rep;
  rep.n = n;
  rep.N = N;
  rep.alphas.resize(static_cast<std::size_t>(n + 1));
  rep.alphas[0] = gammas[static_cast<std::size_t>(n)];
  for (int k = 1; k <= n; ++k) rep.alphas[static_cast<std::size_t>(k)] = gammas[static_cast<std::size_t>(k - 1)];
  return rep;
}

CMatrix CliffordRep::symbol(std::span<const double> xi, double m) const {
  CMatrix s = m * alphas[0];
  for (int k = 1; k <= n; ++k) s += xi[static_cast<std::size_t>(k - 1)] * alphas[static_cast<std::size_t>(k)];
  return s;
}

double anticommutator_defect(const CliffordRep& rep) {
  double defect = 0.0;
  const auto count = rep.alphas.size();
  for (std::size_t j = 0; j < count; ++j) {
    for (std::size_t k = j; k < count; ++k) {
      CMatrix ac = rep.alphas[j] * rep.alphas[k] + rep.alphas[k] * rep.alphas[j];
      if (j == k) ac -= 2.0 * CMatrix::Identity(rep.N, rep.N);
      defect = std::max(defect, ac.cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

} // namespace diracbs
