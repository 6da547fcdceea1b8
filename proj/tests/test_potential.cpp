#include <doctest.h>

#include <filesystem>
#include <random>

#include "diracbs/clifford.hpp"
#include "diracbs/potential.hpp"
#include "oracles.hpp"

using namespace diracbs;

namespace {

CMatrix random_matrix(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

double max_entry(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<double> at_radius(int n, double r) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  x[0] = r;
  return x;
}

} // namespace

TEST_CASE("preset values") {
  const auto inv = PotentialSpec::preset("inverse-square", 3, 4, 1.0);
  CHECK(max_entry(inv.eval(at_radius(3, 1.0)) - 0.25 * CMatrix::Identity(4, 4)) <= 1e-15);

  const auto cinv = PotentialSpec::preset("complex-inverse-square", 3, 4, cplx(1.0, 1.0));
  CHECK(max_entry(cinv.eval(at_radius(3, 0.0)) - cplx(1.0, 1.0) * CMatrix::Identity(4, 4)) <= 1e-15);

  const auto bump = PotentialSpec::preset("bump", 3, 4, 2.0, 1.0);
  CHECK(max_entry(bump.eval(at_radius(3, 1.0))) == 0.0);
  CHECK(max_entry(bump.eval(at_radius(3, 1.5))) == 0.0);
  CHECK(std::abs(bump.eval(at_radius(3, 0.0))(0, 0) - 2.0) <= 1e-14);

  const auto dd = PotentialSpec::preset("dyadic-decay", 3, 1, 1.0, 1.0, 2.0);
  CHECK(dd.eval(at_radius(3, std::exp(1.0)))(0, 0).real() == doctest::Approx(std::exp(-1.0) / 4.0));
  CHECK_THROWS_AS(dd.eval(at_radius(3, 0.0)), DomainError);
}

TEST_CASE("matrix-mix needs spinor components") {
  CHECK_THROWS_AS(PotentialSpec::preset("matrix-mix", 3, 1, 1.0), ValidationError);
  const auto mix = PotentialSpec::preset("matrix-mix", 3, 4, 1.0);
  const auto rep = build_clifford(3);
  const CMatrix expected = 0.25 * (rep.kinetic(1) + cplx(0.0, 1.0) * CMatrix::Identity(4, 4));
  CHECK(max_entry(mix.eval(at_radius(3, 1.0)) - expected) <= 1e-15);
  CHECK_THROWS_AS(PotentialSpec::preset("no-such", 3, 4, 1.0), ValidationError);
}

TEST_CASE("operator norms") {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = cplx(0.0, -4.0);
  CHECK(matrix_opnorm(d) == doctest::Approx(4.0));
  const auto V = PotentialSpec::preset("inverse-square", 3, 4, cplx(3.0, 4.0));
  CHECK(pointwise_opnorm(V, at_radius(3, 0.0)) == doctest::Approx(5.0));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const CMatrix m = random_matrix(4, rng);
    const double expected = oracle::singular_values(oracle::from(m))[0];
    CHECK(std::abs(matrix_opnorm(m) - expected) <= 1e-10 * expected);
  }
}

TEST_CASE("scalar polar factors") {
  CMatrix v(1, 1);
  v(0, 0) = -1.0;
  auto f = polar_factors(v);
  CHECK(std::abs(f.W(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(f.U(0, 0) + 1.0) <= 1e-15);
  CHECK(std::abs(f.A(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(f.B(0, 0) + 1.0) <= 1e-15);

  v(0, 0) = cplx(0.0, 1.0);
  f = polar_factors(v);
  CHECK(std::abs(f.W(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(f.U(0, 0) - cplx(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(f.A(0, 0) - 1.0) <= 1e-15);
  CHECK(std::abs(f.B(0, 0) - cplx(0.0, -1.0)) <= 1e-15);
  CHECK(std::abs((f.B.adjoint() * f.A)(0, 0) - cplx(0.0, 1.0)) <= 1e-15);
}

TEST_CASE("factor reconstruction and norm split") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const CMatrix v = random_matrix(4, rng);
    const auto f = polar_factors(v);
    const double nv = matrix_opnorm(v);
    CHECK(matrix_opnorm(f.B.adjoint() * f.A - v) <= 1e-12 * nv);
    CHECK(std::abs(matrix_opnorm(f.A) * matrix_opnorm(f.A) - nv) <= 1e-12 * nv);
    CHECK(std::abs(matrix_opnorm(f.B) * matrix_opnorm(f.B) - nv) <= 1e-12 * nv);
  }
}

TEST_CASE("rank-deficient matrices keep a unitary U") {
  std::mt19937_64 rng(9);
  CMatrix v = random_matrix(4, rng);
  v.col(2) = v.col(0);
  v.col(3).setZero();
  const auto f = polar_factors(v);
  CHECK(max_entry(f.U.adjoint() * f.U - CMatrix::Identity(4, 4)) <= 1e-12);
  CHECK(matrix_opnorm(f.B.adjoint() * f.A - v) <= 1e-12 * matrix_opnorm(v));
  const auto z = polar_factors(CMatrix::Zero(3, 3));
  CHECK(max_entry(z.U - CMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("Factorization evaluates pointwise") {
  const auto V = PotentialSpec::preset("matrix-mix", 3, 4, cplx(0.5, -0.2));
  const auto fac = polar_factorize(V);
  const auto x = at_radius(3, 0.7);
  CHECK(matrix_opnorm(fac.B(x).adjoint() * fac.A(x) - V.eval(x)) <= 1e-12);
}

TEST_CASE("grid-sampled potentials") {
  GridSpec g{3, 2.0, 4, 1};
  const auto V = PotentialSpec::preset("complex-inverse-square", 3, 2, cplx(1.0, 0.5));
  const auto data = sample_potential(V, g);
  const auto S = PotentialSpec::sampled(data);
  std::vector<double> x(3);
  for (std::size_t p = 0; p < g.points(); ++p) {
    g.position(p, x);
    CHECK(max_entry(S.eval(x) - V.eval(x)) == 0.0);
  }
  // nearest sample: sample 0 sits at (-1.5, -1.5, -1.5)
  const std::vector<double> near{-1.4, -1.6, -1.3};
  const std::vector<double> s0{-1.5, -1.5, -1.5};
  CHECK(max_entry(S.eval(near) - V.eval(s0)) == 0.0);
  CHECK_THROWS_AS(S.eval(std::vector<double>{2.5, 0.0, 0.0}), DomainError);

  const auto dir = std::filesystem::temp_directory_path() / "diracbs_potential_test";
  std::filesystem::create_directories(dir);
  write_potential_text(*data, dir / "v.txt");
  write_potential_binary(*data, dir / "v.bin");
  for (const auto* name : {"v.txt", "v.bin"}) {
    const auto back = read_potential_file(dir / name);
    REQUIRE(back->matrices.size() == data->matrices.size());
    CHECK(back->lattice == data->lattice);
    for (std::size_t p = 0; p < data->matrices.size(); ++p) CHECK(max_entry(back->matrices[p] - data->matrices[p]) <= 1e-15);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("scaling and zero potential") {
  const auto V = PotentialSpec::preset("bump", 3, 1, 2.0, 1.5);
  const auto W = V.scaled(cplx(0.0, 3.0));
  const auto x = at_radius(3, 0.4);
  CHECK(std::abs(W.eval(x)(0, 0) - cplx(0.0, 3.0) * V.eval(x)(0, 0)) <= 1e-14);
  const auto Z = PotentialSpec::zero(3, 4);
  CHECK(Z.is_zero());
  CHECK(max_entry(Z.eval(x)) == 0.0);
}
