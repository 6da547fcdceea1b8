#include <doctest.h>

#include <cmath>
#include <random>

#include "diracbs/enclosure.hpp"

using namespace diracbs;

namespace {

/// Upper rounding to three significant figures.
double ceil3(double v) {
  const double e = std::pow(10.0, std::floor(std::log10(v)) - 2);
  return std::ceil(v / e) * e;
}

double floor3(double v) {
  const double e = std::pow(10.0, std::floor(std::log10(v)) - 2);
  return std::floor(v / e) * e;
}

const RhoNorms kRhoBounds{2.0, 1.0};

} // namespace

TEST_CASE("C2 and C1 at the rho bounds 2 and 1") {
  CHECK(C2(3) == doctest::Approx(1728.0 * std::max(std::sqrt(3.0), std::pow(516.0, 0.25))));
  CHECK(ceil3(C2(3)) == doctest::Approx(8240.0));
  const auto massive = eval_constants(3, 1.0, kRhoBounds);
  CHECK(ceil3(massive.C1) == doctest::Approx(1.11e5));
  const auto massless = eval_constants(3, 0.0, kRhoBounds);
  CHECK(ceil3(massless.C1) == doctest::Approx(6.59e4));
  CHECK(massless.C1 == 2.0 * C2(3) * 4.0);
  CHECK(floor3(1.0 / ceil3(massive.C1)) == doctest::Approx(9.00e-6));
  CHECK(floor3(1.0 / ceil3(massless.C1)) == doctest::Approx(1.51e-5));
  CHECK(floor3(1.0 / (2.0 * ceil3(C2(3)))) == doctest::Approx(6.06e-5));
  CHECK(kato_yajima(3) == doctest::Approx(std::sqrt(M_PI / 2.0)));
  REQUIRE(massive.C3);
  CHECK(*massive.C3 > 0.0);
  for (double m : {0.1, 0.5, 1.0}) CHECK(eval_constants(3, m, kRhoBounds).C1 <= massive.C1);
}

TEST_CASE("dimension guard") {
  CHECK_THROWS_AS(C2(2), DomainError);
  CHECK_THROWS_AS(eval_constants(2, 1.0, kRhoBounds), DomainError);
  const auto V = PotentialSpec::preset("inverse-square", 2, 2, 1e-6);
  CertifyParams p;
  p.m = 1.0;
  CHECK_THROWS_AS(certify("2.3", V, p), DomainError);
}

TEST_CASE("brackets") {
  for (double y : {0.1, 1.0, 7.0}) CHECK(dirac_bracket(cplx(0.0, y), 1.0) == doctest::Approx(2.0));
  CHECK(dirac_bracket(cplx(2.0, 0.5), 1.0) == doctest::Approx(1.0 + std::sqrt(std::abs(cplx(3.0, 0.5) / cplx(1.0, 0.5)))));
  CHECK(japanese_bracket(cplx(3.0, 4.0)) == doctest::Approx(std::sqrt(26.0)));
}

TEST_CASE("weighted certificates (2.3)") {
  CertifyParams p;
  p.m = 1.0;
  const auto stable = certify("2.3", PotentialSpec::preset("inverse-square", 3, 4, 5e-6), p);
  CHECK(stable.verdict == Verdict::stable);
  REQUIRE(stable.norms.size() == 1);
  REQUIRE(stable.norms[0].upper_bound);
  CHECK(*stable.norms[0].upper_bound == doctest::Approx(5e-6).epsilon(1e-6));
  // threshold consistency from the certificate fields alone
  REQUIRE(stable.constant);
  CHECK(*stable.constant * *stable.norms[0].upper_bound < 1.0);
  CHECK(*stable.threshold == doctest::Approx(1.0 / *stable.constant));
  CHECK_FALSE(stable.disks);
  CHECK(stable.input_hash.size() == 16);

  const auto bad = certify("2.3", PotentialSpec::preset("inverse-square", 3, 4, 1.0), p);
  CHECK(bad.verdict == Verdict::inconclusive);
  CHECK_FALSE(bad.notes.empty());
}

TEST_CASE("massless certificate (2.4)") {
  CertifyParams p;
  const auto unit = n1_norm(PotentialSpec::preset("inverse-square", 3, 4, 1.0));
  const double c = 5e-5 / *unit.upper_bound;
  const auto cert = certify("2.4", PotentialSpec::preset("inverse-square", 3, 4, c), p);
  CHECK(cert.verdict == Verdict::stable);
  CHECK(*cert.norms[0].upper_bound == doctest::Approx(5e-5).epsilon(1e-9));
  CHECK(*cert.threshold == doctest::Approx(1.0 / (2.0 * C2(3))));
  p.m = 1.0;
  CHECK_THROWS_AS(certify("2.4", PotentialSpec::preset("inverse-square", 3, 4, c), p), ValidationError);
}

TEST_CASE("qualitative theorems never decide") {
  CertifyParams p;
  p.m = 1.0;
  const auto V = PotentialSpec::preset("inverse-square", 3, 4, 1e-12);
  for (const char* id : {"2.1", "2.2-massless", "2.2-massive"}) {
    const auto c = certify(id, V, p);
    CHECK(c.verdict == Verdict::inconclusive);
    CHECK(c.norms.size() == 1);
    CHECK_FALSE(c.constant);
  }
  CHECK_THROWS_AS(certify("9.9", V, p), ValidationError);
}

TEST_CASE("disk formula example") {
  const double c2 = C2(3);
  const auto d = disk_pair(1.0, 1.0 / (3.0 * c2), c2, 1);
  CHECK(d.V_j == doctest::Approx(4.0));
  CHECK(d.x0_plus == doctest::Approx(17.0 / 15.0));
  CHECK(d.x0_minus == doctest::Approx(-17.0 / 15.0));
  CHECK(d.r0 == doctest::Approx(8.0 / 15.0));
  CHECK_THROWS_AS(disk_pair(1.0, 1.0 / (2.0 * c2), c2, 1), ValidationError);
  CHECK_THROWS_AS(disk_pair(0.0, 1e-9, c2, 1), ValidationError);
}

TEST_CASE("disk identities over random admissible inputs") {
  const double c2 = C2(3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mass(0.01, 10.0), frac(1e-6, 1.0 - 1e-6);
  for (int t = 0; t < 1000; ++t) {
    const double m = mass(rng);
    const double N = frac(rng) / (2.0 * c2);
    const auto d = disk_pair(m, N, c2, 1);
    CHECK(std::abs(d.x0_plus * d.x0_plus - d.r0 * d.r0 - m * m) <= 1e-12 * std::max(1.0, d.x0_plus * d.x0_plus));
    CHECK(d.x0_minus == -d.x0_plus);
    CHECK(d.V_j > 1.0);
    // nearest point to the origin: x0 - r0 = m (V - 1) / (V + 1) > 0
    CHECK(d.x0_plus - d.r0 == doctest::Approx(m * (d.V_j - 1.0) / (d.V_j + 1.0)).epsilon(1e-9));
    CHECK(d.x0_plus - d.r0 > 0.0);
    // monotone in N
    const auto e = disk_pair(m, N * 0.999, c2, 1);
    CHECK(e.r0 <= d.r0);
    CHECK(e.x0_plus <= d.x0_plus);
  }
  const auto tiny = disk_pair(2.0, 1e-14, c2, 1);
  CHECK(std::abs(tiny.x0_plus - 2.0) <= 1e-6);
  CHECK(tiny.r0 <= 1e-6);
  const auto zero = disk_pair(2.0, 0.0, c2, 1);
  CHECK(zero.x0_plus == 2.0);
  CHECK(zero.r0 == 0.0);
}

TEST_CASE("j = 1 disks lie inside j = 2 disks") {
  CertifyParams p;
  p.m = 1.0;
  for (const auto& V : {PotentialSpec::preset("inverse-square", 3, 4, 1e-6),
                        PotentialSpec::preset("complex-inverse-square", 3, 4, cplx(0.0, 2e-6)),
                        PotentialSpec::preset("bump", 3, 4, 3e-6, 1.5)}) {
    const auto d1 = enclosure_disks(V, 1.0, 1, p);
    const auto d2 = enclosure_disks(V, 1.0, 2, p);
    REQUIRE(d1.disks);
    REQUIRE(d2.disks);
    CHECK(d2.disks->V_j <= d1.disks->V_j);
    // a disk of radius r1 centred at x1 sits inside one of radius r2 at x2 iff |x1 - x2| + r1 <= r2
    CHECK(std::abs(d1.disks->x0_plus - d2.disks->x0_plus) + d1.disks->r0 <= d2.disks->r0 * (1 + 1e-12));
  }
}

TEST_CASE("disks present iff the verdict is enclosure") {
  CertifyParams p;
  p.m = 1.0;
  const auto big = enclosure_disks(PotentialSpec::preset("inverse-square", 3, 4, 1.0), 1.0, 1, p);
  CHECK(big.verdict == Verdict::inconclusive);
  CHECK_FALSE(big.disks);
  const auto small = enclosure_disks(PotentialSpec::preset("inverse-square", 3, 4, 1e-6), 1.0, 1, p);
  CHECK(small.verdict == Verdict::enclosure);
  CHECK(small.disks);
  CHECK_THROWS_AS(enclosure_disks(PotentialSpec::preset("inverse-square", 3, 4, 1e-6), 0.0, 1, p), ValidationError);
  CHECK_THROWS_AS(enclosure_disks(PotentialSpec::preset("inverse-square", 3, 4, 1e-6), 1.0, 3, p), ValidationError);
}

TEST_CASE("non-summable potentials stay inconclusive") {
  CertifyParams p;
  p.m = 1.0;
  // sigma = 1/2: |x| V ~ (log)^{-1/2}, the N1 sum diverges at both ends
  const auto V = PotentialSpec::preset("dyadic-decay", 3, 4, 1e-9, 1.0, 0.5);
  const auto c = enclosure_disks(V, 1.0, 1, p);
  CHECK(c.verdict == Verdict::inconclusive);
  CHECK_FALSE(c.disks);
}
