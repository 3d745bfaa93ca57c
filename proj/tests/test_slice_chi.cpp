#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qpolar/bounded_transform.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/slice_chi.hpp"
#include "qpolar/verify.hpp"

using namespace qpolar;

TEST_CASE("standard J") {
  const StandardJ j{3};
  const QMatrix m = j.matrix();
  CHECK(adjoint(m) == m * -1.0);
  CHECK(adjoint(m) * m == QMatrix::identity(3));

  Rng rng(51);
  const QVector x = gen::vector(rng, 3);
  const Quaternion q = rng.quaternion();
  CHECK(norm(j.apply(x * q) - j.apply(x) * q) <= 1e-15);
  // J(x1 + x2 j) = (x1 - x2 j) i
  for (std::size_t k = 0; k < 3; ++k) {
    const ComplexPair s = split(x[k]);
    const Quaternion want =
        (Quaternion::from_complex(s.alpha) - Quaternion::from_complex(s.beta) * kJ) * kI;
    CHECK(abs(j.apply(x)[k] - want) <= 1e-15);
  }
}

TEST_CASE("slice projection") {
  const QVector real{Quaternion{1}, Quaternion{-2}, Quaternion{3}};
  const auto [rp, rm] = slice_project(real);
  CHECK(rp == real);
  CHECK(norm(rm) == 0.0);

  const QVector e1j = QVector::unit(2, 0) * kJ;
  const auto [jp, jm] = slice_project(e1j);
  CHECK(norm(jp) == 0.0);
  CHECK(jm == e1j);

  Rng rng(52);
  const StandardJ j{4};
  for (int t = 0; t < 200; ++t) {
    const QVector x = gen::vector(rng, 4);
    const auto [p, m] = slice_project(x);
    CHECK(norm(p + m - x) == 0.0);
    CHECK(norm(j.apply(p) - p * kI) <= 1e-15);
    CHECK(norm(j.apply(m) + m * kI) <= 1e-15);
    // <p+|p-> + <p-|p+> = 0
    CHECK(abs(inner(p, m) + inner(m, p)) <= 1e-13);
  }
}

TEST_CASE("anti-linear isomorphism") {
  const QVector e1 = QVector::unit(2, 0);
  CHECK(anti_iso_phi(e1) == e1 * kJ);
  CHECK(anti_iso_phi(e1 * kI) == e1 * kK);
  CHECK(anti_iso_phi(e1 * kI) == anti_iso_phi(e1) * -kI);
  CHECK(norm(anti_iso_phi(QVector(2))) == 0.0);
  CHECK_THROWS_AS(anti_iso_phi(e1 * kJ), Error);

  // Phi(x lambda) = Phi(x) conj(lambda); Phi(x) lies in the negative slice
  Rng rng(53);
  const StandardJ j{3};
  for (int t = 0; t < 50; ++t) {
    const auto [p, m] = slice_project(gen::vector(rng, 3));
    const Quaternion lambda = Quaternion::from_complex(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    CHECK(norm(anti_iso_phi(p * lambda) - anti_iso_phi(p) * conj(lambda)) <= 1e-15);
    const QVector phi = anti_iso_phi(p);
    CHECK(norm(j.apply(phi) + phi * kI) <= 1e-15);
  }
}

TEST_CASE("operator split") {
  const SliceSplit s = split_operator(QMatrix{{kJ}});
  CHECK(s.a1(0, 0) == Complex(0, 0));
  CHECK(s.a2(0, 0) == Complex(1, 0));

  const QMatrix c{{Quaternion{1, 2}, Quaternion{0, -1}}, {Quaternion{3}, Quaternion{0.5, 0.5}}};
  const SliceSplit sc = split_operator(c);
  CHECK(max_abs_entry(sc.a2) == 0.0);

  Rng rng(54);
  const QMatrix a = gen::general(rng, 3, 3);
  CHECK(join_operator(split_operator(a)) == a);
}

TEST_CASE("chi examples") {
  const CMatrix cj = chi(QMatrix{{kJ}});
  CHECK(cj == CMatrix{{0, 1}, {-1, 0}});
  CHECK(chi(QMatrix::identity(3)) == CMatrix::identity(6));
  CHECK(chi_pullback(CMatrix{{0, 1}, {-1, 0}}) == QMatrix{{kJ}});
  CHECK_THROWS_AS(chi_pullback(CMatrix{{1, 0}, {0, 2}}), Error);
}

TEST_CASE("chi is an algebra homomorphism over C_i") {
  Rng rng(55);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(5);
    const QMatrix a = gen::general(rng, n, n), b = gen::general(rng, n, n);
    CHECK(max_abs_entry(chi(a * b) - chi(a) * chi(b)) < 1e-12);
    CHECK(max_abs_entry(chi(a + b) - (chi(a) + chi(b))) == 0.0);
    CHECK(max_abs_entry(chi(adjoint(a)) - adjoint(chi(a))) == 0.0);
    // C_i scalars act as the left scaling lambda A
    const Quaternion lambda = Quaternion::from_complex(Complex(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    const CMatrix lhs = chi(left_scale(lambda, a));
    CMatrix rhs = chi(a);
    for (std::size_t r = 0; r < 2 * n; ++r) {
      const Complex l = r < n ? Complex(lambda.w, lambda.x) : Complex(lambda.w, -lambda.x);
      for (std::size_t c = 0; c < 2 * n; ++c) rhs(r, c) *= l;
    }
    CHECK(max_abs_entry(lhs - rhs) < 1e-14);
    CHECK(chi_pullback(chi(a)) == a);
  }
}

TEST_CASE("chi matches the real representation product oracle") {
  Rng rng(56);
  const QMatrix a = gen::general(rng, 3, 4), b = gen::general(rng, 4, 2);
  const oracle::RMat ab = oracle::real_rep(a * b);
  const oracle::RMat prod = oracle::mul(oracle::real_rep(a), oracle::real_rep(b));
  double worst = 0.0;
  for (std::size_t k = 0; k < ab.a.size(); ++k) worst = std::max(worst, std::abs(ab.a[k] - prod.a[k]));
  CHECK(worst < 1e-13);
}

TEST_CASE("norm equality") {
  Rng rng(57);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const QMatrix a = gen::general(rng, n, n);
    const double na = operator_norm(a);
    CHECK(std::abs(na - spectral_norm(chi(a))) <= 1e-9 * std::max(1.0, na));
  }
}

TEST_CASE("vector embedding") {
  const auto e1 = embed_vector(QVector::unit(2, 0));
  CHECK(e1 == std::vector<Complex>{1, 0, 0, 0});
  const auto e1j = embed_vector(QVector::unit(2, 0) * kJ);
  CHECK(e1j == std::vector<Complex>{0, 0, -1, 0});

  const QMatrix a = truncated_bounded_example(10);
  const auto e4 = embed_vector(QVector::unit(10, 3));
  const auto img = chi(a) * std::span<const Complex>(e4);
  double worst = 0.0;
  for (const Complex& v : img) worst = std::max(worst, std::abs(v));
  CHECK(worst <= 1e-12);

  Rng rng(58);
  for (int t = 0; t < 50; ++t) {
    const QMatrix m = gen::general(rng, 3, 4);
    const QVector x = gen::vector(rng, 4);
    CHECK(pullback_vector(embed_vector(x)) == x);
    const auto lhs = embed_vector(m * x);
    const auto ex = embed_vector(x);
    const auto rhs = chi(m) * std::span<const Complex>(ex);
    for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(std::abs(lhs[k] - rhs[k]) <= 1e-13);
  }
}

TEST_CASE("action identity through the complex blocks") {
  Rng rng(59);
  for (int t = 0; t < 50; ++t) {
    const QMatrix a = gen::general(rng, 3, 3);
    const QVector x = gen::vector(rng, 3);
    const SliceSplit s = split_operator(a);
    const QVector ax = a * x;
    for (std::size_t r = 0; r < 3; ++r) {
      Complex first, second;
      for (std::size_t c = 0; c < 3; ++c) {
        const ComplexPair xc = split(x[c]);
        first += s.a1(r, c) * xc.alpha - s.a2(r, c) * std::conj(xc.beta);
        second += s.a1(r, c) * xc.beta + s.a2(r, c) * std::conj(xc.alpha);
      }
      CHECK(abs(ax[r] - join({first, second})) <= 1e-12);
    }
  }
}

TEST_CASE("null dimensions double under chi") {
  Rng rng(60);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const std::size_t r = rng.below(n + 1);
    const QMatrix a = gen::rank_deficient(rng, n, n, r);
    const std::size_t qnull = null_range_bases(a).null_basis.size();
    CHECK(qnull == n - r);
    CHECK(2 * n - svd(chi(a)).rank == 2 * qnull);
  }
}

TEST_CASE("equivalence suite") {
  for (const auto& e : equivalence_suite(QMatrix::identity(3)).entries) CHECK(e.agree);

  const EquivalenceReport j = equivalence_suite(QMatrix{{kJ}});
  CHECK(j.all_agree);
  for (const auto& e : j.entries) {
    if (e.name == "anti_self_adjoint" || e.name == "unitary") {
      CHECK(e.quaternion_flag);
      CHECK(e.chi_flag);
    }
  }

  Rng rng(61);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(5);
    QMatrix a;
    switch (t % 5) {
      case 0: a = gen::hermitian(rng, n); break;
      case 1: a = gen::psd(rng, n, n); break;
      case 2: a = gen::unitary(rng, n); break;
      case 3: a = gen::partial_isometry(rng, n, n, rng.below(n + 1)); break;
      default: a = gen::normal(rng, n, rng.below(n + 1)); break;
    }
    const EquivalenceReport rep = equivalence_suite(a);
    CHECK(rep.entries.size() == 8);
    CHECK(rep.all_agree);
  }
}
