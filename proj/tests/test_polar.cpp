#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qpolar/bounded_transform.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/verify.hpp"

using namespace qpolar;

namespace {

double dev(const QMatrix& a, const QMatrix& b) { return max_abs_entry(a - b); }

QMatrix real_diag(std::initializer_list<double> d) {
  QMatrix m(d.size(), d.size());
  std::size_t k = 0;
  for (double v : d) m(k, k) = Quaternion{v}, ++k;
  return m;
}

double check_residual(const Report& r, const std::string& name) {
  for (const auto& c : r.checks()) {
    if (c.name == name) return c.residual;
  }
  FAIL("missing check " << name);
  return 0.0;
}

}  // namespace

TEST_CASE("spectral square root") {
  CHECK(dev(sqrt_positive_spectral(QMatrix::identity(3)), QMatrix::identity(3)) <= 1e-15);
  CHECK(dev(sqrt_positive_spectral(real_diag({4, 9})), real_diag({2, 3})) <= 1e-15);
  CHECK_THROWS_AS(sqrt_positive_spectral(real_diag({1, -1})), Error);
  CHECK_THROWS_AS(sqrt_positive_spectral(QMatrix{{kJ}}), Error);

  Rng rng(71);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix p = gen::psd(rng, n, rng.below(n + 1));
    const QMatrix r = sqrt_positive_spectral(p);
    const double scale = std::max(1.0, operator_norm(p));
    CHECK(operator_norm(r * r - p) < 1e-8 * scale);
    CHECK(operator_norm(r * p - p * r) < 1e-8 * scale);
    CHECK(classify(r).positive.value);
  }
}

TEST_CASE("spectral square root matches Denman-Beavers in quaternion arithmetic") {
  Rng rng(72);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(5);
    const QMatrix p = gen::psd(rng, n, n) + QMatrix::identity(n) * 0.1;
    CHECK(dev(sqrt_positive_spectral(p), oracle::denman_beavers(p)) < 1e-9);
  }
}

TEST_CASE("wouk square root") {
  CHECK(dev(sqrt_positive_wouk(QMatrix::identity(2)), QMatrix::identity(2)) <= 1e-14);
  CHECK(std::abs(sqrt_positive_wouk(real_diag({3}))(0, 0).w - std::sqrt(3.0)) <= 1e-14);
  CHECK_THROWS_AS(sqrt_positive_wouk(real_diag({1, -1})), Error);

  Rng rng(73);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix p = gen::psd(rng, n, rng.below(n + 1));
    CHECK(operator_norm(sqrt_positive_wouk(p) - sqrt_positive_spectral(p)) < 1e-7);
  }
}

TEST_CASE("strictly positive square root") {
  CHECK(dev(sqrt_strictly_positive(real_diag({4}), 1.0), real_diag({2})) <= 1e-14);
  CHECK(dev(sqrt_strictly_positive(QMatrix::identity(3), 0.5), QMatrix::identity(3)) <= 1e-14);
  CHECK_THROWS_AS(sqrt_strictly_positive(real_diag({4, 0.1}), 0.5), Error);
  CHECK_THROWS_AS(sqrt_strictly_positive(real_diag({4}), 0.0), Error);

  Rng rng(74);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix p = gen::psd(rng, n, n) + QMatrix::identity(n);
    const QMatrix c = sqrt_strictly_positive(p, 0.99);
    CHECK(operator_norm(c - sqrt_positive_spectral(p)) < 1e-7);
    CHECK(classify(c).positive.value);
  }
}

TEST_CASE("square root commutes with polynomials in P") {
  Rng rng(75);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix p = gen::psd(rng, n, rng.below(n + 1));
    const QMatrix b = QMatrix::identity(n) * 0.3 + p * -1.7 + p * p * 0.2;
    const QMatrix r = sqrt_positive_spectral(p);
    CHECK(operator_norm(b * r - r * b) <= 1e-8 * std::max(1.0, operator_norm(b)));
  }
}

TEST_CASE("modulus") {
  const QMatrix a = truncated_bounded_example(10);
  QMatrix want(10, 10);
  want(0, 0) = want(1, 1) = Quaternion{1.0 / std::sqrt(2.0)};
  for (int k = 6; k <= 10; ++k) want(k - 1, k - 1) = Quaternion{k / std::sqrt(k * k + 1.0)};
  CHECK(dev(modulus(a), want) <= 1e-10);

  Rng rng(76);
  const QMatrix w = gen::unitary(rng, 4);
  CHECK(dev(modulus(w), QMatrix::identity(4)) <= 1e-12);
  CHECK(dev(modulus(QMatrix{{kJ}}), QMatrix{{kOne}}) <= 1e-15);

  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng.below(6), n = 1 + rng.below(6);
    const QMatrix x = gen::general(rng, m, n);
    const QMatrix abs_x = modulus(x);
    const QVector v = gen::vector(rng, n);
    CHECK(std::abs(norm(abs_x * v) - norm(x * v)) <= 1e-9 * std::max(1.0, norm(v)));
    const double s = std::max(1.0, operator_norm(x));
    CHECK(dev(abs_x * abs_x, adjoint(x) * x) <= 1e-9 * s * s);
  }
}

TEST_CASE("polar decomposition examples") {
  const QMatrix a = truncated_bounded_example(10);
  const PolarFactors f = polar_decompose(a);
  CHECK(dev(f.u0, example_u0(10)) <= 1e-12);
  const QVector e4 = QVector::unit(10, 3);
  CHECK(norm(f.u0 * e4) <= 1e-12);
  CHECK(f.null_rank == 3);
  CHECK(f.corange_rank == 3);
  CHECK_FALSE(f.unique);

  Rng rng(77);
  const QMatrix inv = gen::general(rng, 5, 5);
  const PolarFactors fi = polar_decompose(inv);
  CHECK(fi.unique);
  CHECK(classify(fi.u0).unitary.value);

  QMatrix dj(2, 2);
  dj(0, 0) = kJ;
  const PolarFactors fj = polar_decompose(dj);
  CHECK(dev(fj.u0, dj) <= 1e-15);
  CHECK(dev(fj.abs_t, real_diag({1, 0})) <= 1e-15);
  CHECK_FALSE(fj.unique);
}

TEST_CASE("polar invariants across ranks and shapes") {
  Rng rng(78);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng.below(7), n = 1 + rng.below(7);
    const std::size_t r = rng.below(std::min(m, n) + 1);
    const QMatrix x = gen::rank_deficient(rng, m, n, r);
    const PolarFactors f = polar_decompose(x);
    CHECK(f.rank == r);
    CHECK(f.rank == oracle::rank_oracle(x));
    CHECK(f.unique == (r == m || r == n));
    const Report rep = polar_checks(x, f, 1e-9);
    CHECK(rep.all_passed());
    if (!rep.all_passed()) MESSAGE(rep.render());
  }
}

TEST_CASE("polar factor agrees with T |T|^{-1} for full column rank") {
  Rng rng(79);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(5);
    const std::size_t m = n + rng.below(3);
    const QMatrix x = gen::general(rng, m, n);
    const QMatrix root = oracle::denman_beavers(adjoint(x) * x);
    const QMatrix u = x * oracle::inverse(root);
    CHECK(dev(polar_decompose(x).u0, u) < 1e-8);
  }
}

TEST_CASE("structure report") {
  QMatrix d(2, 2);
  d(0, 0) = kI;
  d(1, 1) = kK;
  const PolarFactors fd = polar_decompose(d);
  const Report rd = structure_report(d, fd, 1e-9);
  CHECK(rd.all_passed());
  CHECK(check_residual(rd, "anti_self_adjoint_u0") <= 1e-12);

  Rng rng(80);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix h = gen::hermitian(rng, n);
    const Report rh = structure_report(h, polar_decompose(h), 1e-9);
    CHECK(rh.all_passed());
    CHECK(check_residual(rh, "self_adjoint_u0") <= 1e-9);

    const QMatrix nm = gen::normal(rng, n, rng.below(n + 1));
    const Report rn = structure_report(nm, polar_decompose(nm), 1e-9);
    CHECK(rn.all_passed());
    CHECK(check_residual(rn, "normal_u0_commutes_abs") < 1e-9);
  }
}

TEST_CASE("unitary extension") {
  const QMatrix zero(2, 2);
  CHECK(dev(unitary_extension(zero, polar_decompose(zero)), QMatrix::identity(2)) == 0.0);

  QMatrix dj(2, 2);
  dj(0, 0) = kJ;
  QMatrix want(2, 2);
  want(0, 0) = kJ;
  want(1, 1) = kOne;
  CHECK(dev(unitary_extension(dj, polar_decompose(dj)), want) <= 1e-15);

  CHECK_THROWS_AS(unitary_extension(QMatrix{{kOne, kOne}, {Quaternion{}, kOne}},
                                    polar_decompose(QMatrix{{kOne, kOne}, {Quaternion{}, kOne}})),
                  Error);

  Rng rng(81);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix x = gen::normal(rng, n, 1 + rng.below(n));
    const PolarFactors f = polar_decompose(x);
    const QMatrix w = unitary_extension(x, f);
    CHECK(operator_norm(adjoint(w) * w - QMatrix::identity(n)) < 1e-9);
    CHECK(operator_norm(w * f.abs_t - x) < 1e-9);
  }
}

TEST_CASE("perturbed factors") {
  const QMatrix a = truncated_bounded_example(10);
  const PolarFactors f = polar_decompose(a);
  CHECK(perturb_polar(a, f, QMatrix(10, 10)) == f.u0);

  const QMatrix u = perturb_polar(a, f, example_perturbation(10));
  CHECK(operator_norm(u * f.abs_t - a) <= 1e-10);
  CHECK(norm(u * QVector::unit(10, 3) - QVector::unit(10, 2)) <= 1e-12);
  CHECK(classify(u).partial_isometry.value);

  Rng rng(82);
  const QMatrix inv = gen::general(rng, 4, 4);
  const PolarFactors fi = polar_decompose(inv);
  QMatrix v(4, 4);
  v(0, 1) = kOne;
  CHECK_THROWS_AS(perturb_polar(inv, fi, v), Error);
  CHECK_THROWS_AS(perturb_polar(inv, fi, QMatrix(3, 4)), Error);

  // V moving a null vector into the range is rejected
  QMatrix bad(10, 10);
  bad(1, 3) = kOne;
  CHECK_THROWS_AS(perturb_polar(a, f, bad), Error);
  // scaled V is not a partial isometry
  CHECK_THROWS_AS(perturb_polar(a, f, example_perturbation(10) * 2.0), Error);
}

TEST_CASE("uniqueness verdict and witness") {
  Rng rng(83);
  CHECK(uniqueness_verdict(gen::general(rng, 4, 4)));
  CHECK_FALSE(uniqueness_verdict(truncated_bounded_example(10)));

  // injective but not surjective: full column rank 3 -> 4
  const QMatrix tall = gen::general(rng, 4, 3);
  CHECK(uniqueness_verdict(tall));
  const UniquenessWitness wt = uniqueness_witness(tall);
  CHECK_FALSE(wt.u.has_value());

  const QMatrix a = truncated_bounded_example(10);
  const UniquenessWitness w = uniqueness_witness(a);
  REQUIRE(w.u.has_value());
  CHECK(operator_norm(*w.u - w.factors.u0) > 0.5);
  CHECK(operator_norm(*w.u * w.factors.abs_t - a) < 1e-10);
}
