#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "qpolar/quaternion.hpp"
#include "qpolar/verify.hpp"

using namespace qpolar;

TEST_CASE("hamilton relations") {
  CHECK(kI * kJ == kK);
  CHECK(kJ * kK == kI);
  CHECK(kK * kI == kJ);
  CHECK(kI * kI == -kOne);
  CHECK(kJ * kJ == -kOne);
  CHECK(kK * kK == -kOne);
  CHECK(kI * kJ * kK == -kOne);
  // m n = -n m for the fixed pair (i, j)
  CHECK(kI * kJ == -(kJ * kI));
}

TEST_CASE("product examples") {
  const Quaternion q{1, 2, 3, 4};
  CHECK(q * kOne == q);
  CHECK(Quaternion{1, 1, 0, 0} * Quaternion{1, 0, 1, 0} == Quaternion{1, 1, 1, 1});
}

TEST_CASE("product agrees with the multiplication table") {
  Rng rng(7);
  for (int t = 0; t < 1000; ++t) {
    const Quaternion p = rng.quaternion(), q = rng.quaternion();
    const Quaternion a = p * q, b = oracle::table_mul(p, q);
    CHECK(abs(a - b) <= 1e-15);
  }
}

TEST_CASE("associativity and bilinearity") {
  Rng rng(8);
  for (int t = 0; t < 1000; ++t) {
    const Quaternion p = rng.quaternion(), q = rng.quaternion(), r = rng.quaternion();
    const double s = rng.uniform(-3, 3);
    CHECK(abs((p * q) * r - p * (q * r)) <= 1e-14);
    CHECK(abs(p * (q + r) - (p * q + p * r)) <= 1e-14);
    CHECK(abs((p * s) * q - (p * q) * s) <= 1e-14);
  }
}

TEST_CASE("norm multiplicative and conj anti-homomorphism") {
  Rng rng(9);
  double worst_norm = 0.0, worst_conj = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const Quaternion p = rng.quaternion(), q = rng.quaternion();
    const double np = abs(p), nq = abs(q);
    worst_norm = std::max(worst_norm, std::abs(abs(p * q) - np * nq) / (np * nq));
    worst_conj = std::max(worst_conj, abs(conj(p * q) - conj(q) * conj(p)));
  }
  CHECK(worst_norm <= 1e-13);
  CHECK(worst_conj <= 1e-13);
}

TEST_CASE("conj and norm") {
  const auto [c, n] = conj_norm(Quaternion{1, 1, 1, 1});
  CHECK(c == Quaternion{1, -1, -1, -1});
  CHECK(n == 2.0);

  const auto [c0, n0] = conj_norm(Quaternion{});
  CHECK(c0 == Quaternion{});
  CHECK(n0 == 0.0);

  const auto [cij, nij] = conj_norm(kI * kJ);
  CHECK(cij == -kK);
  CHECK(nij == 1.0);

  const Quaternion q{0.3, -1.2, 2.5, 0.7};
  CHECK(conj(conj(q)) == q);
  const Quaternion qq = q * conj(q);
  CHECK(std::abs(qq.w - norm2(q)) <= 1e-15);
  CHECK(std::abs(qq.x) + std::abs(qq.y) + std::abs(qq.z) <= 1e-15);
  CHECK(abs(q * inverse(q) - kOne) <= 1e-15);
}

TEST_CASE("split into complex pair") {
  const ComplexPair p = split(Quaternion{1, 2, 3, 4});
  CHECK(p.alpha == Complex(1, 2));
  CHECK(p.beta == Complex(3, 4));

  const ComplexPair r = split(Quaternion{5});
  CHECK(r.alpha == Complex(5, 0));
  CHECK(r.beta == Complex(0, 0));

  const ComplexPair j = split(kJ);
  CHECK(j.alpha == Complex(0, 0));
  CHECK(j.beta == Complex(1, 0));

  // alpha + beta j, evaluated with the Hamilton product
  Rng rng(10);
  for (int t = 0; t < 1000; ++t) {
    const Quaternion q = rng.quaternion();
    const ComplexPair s = split(q);
    CHECK(join(s) == q);
    const Quaternion rebuilt = Quaternion::from_complex(s.alpha) + Quaternion::from_complex(s.beta) * kJ;
    CHECK(rebuilt == q);
  }
}

TEST_CASE("text form round trip") {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Quaternion q = rng.quaternion() * 1e3;
    CHECK(parse_quaternion(to_string(q)) == q);
  }
  CHECK(parse_quaternion("0 0 1 0") == kJ);
  CHECK_THROWS_AS(parse_quaternion("1 2 3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_quaternion("1 2 3 x"), std::invalid_argument);
}
