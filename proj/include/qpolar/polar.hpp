#pragma once

// Positive square roots, the modulus |T| and the polar decomposition
// T = U0 |T| of right H-linear operators, together with the U = U0 + V P
// family of alternative partial-isometry factors.

#include <cstddef>
#include <optional>

#include "qpolar/qlinalg.hpp"
#include "qpolar/report.hpp"

namespace qpolar {

// chi -> psd_sqrt -> pullback. Throws NotPositive.
QMatrix sqrt_positive_spectral(const QMatrix& p, double tol = kDefaultRankTol);

// Square root of a positive P without assuming invertibility:
//   S = P (I + P)^{-1} = I - (I + P)^{-1},  C = (I + P)^{1/2},  sqrt(P) = S^{1/2} C.
// C comes from the strictly positive construction since I + P >= I.
QMatrix sqrt_positive_wouk(const QMatrix& p, double tol = kDefaultRankTol);

// Square root of P >= lambda_min > 0 through its inverse: ((P^{-1})^{1/2})^{-1}.
// Throws NotStrictlyPositive when the smallest eigenvalue is below lambda_min.
QMatrix sqrt_strictly_positive(const QMatrix& p, double lambda_min, double tol = kDefaultRankTol);

// P^{-1} for strictly positive P.
QMatrix inverse_positive(const QMatrix& p, double tol = kDefaultRankTol);

// |T| = (T* T)^{1/2}, taken from the singular value decomposition of chi(T).
QMatrix modulus(const QMatrix& t, double tol = kDefaultRankTol);

struct PolarFactors {
  QMatrix u0;     // partial isometry, N(U0) = N(T)
  QMatrix abs_t;  // |T|
  std::size_t rank = 0;
  std::size_t null_rank = 0;     // dim N(T)
  std::size_t corange_rank = 0;  // dim R(T)^perp
  bool unique = false;           // null_rank == 0 || corange_rank == 0
};

// T may be rectangular (rows x cols); U0 has the shape of T and |T| is cols x cols.
PolarFactors polar_decompose(const QMatrix& t, double tol = kDefaultRankTol);

// Reconstruction, the three identities U0*U0|T| = |T|, U0*T = |T|,
// U0U0*T = T, positivity of |T|, and N(U0) = N(T). Residuals are divided by
// max(1, ||T||) and compared against `threshold`.
Report polar_checks(const QMatrix& t, const PolarFactors& f, double threshold,
                    double tol = kDefaultRankTol);

// Structure carried from T to U0: normal => U0 normal, commuting with |T| and
// unitary on R(T); self-adjoint => U0 self-adjoint; anti-self-adjoint => U0
// anti-self-adjoint. Only the implications whose hypothesis holds are listed.
Report structure_report(const QMatrix& t, const PolarFactors& f, double threshold,
                        double tol = kDefaultRankTol);

// W = U0 on R(|T|), identity on N(T). Throws NotNormal.
QMatrix unitary_extension(const QMatrix& t, const PolarFactors& f, double tol = kDefaultRankTol);

// U = U0 + V P_{N(T)}. V must vanish on N(T)^perp, map into R(T)^perp and be a
// partial isometry; otherwise BadPerturbation.
QMatrix perturb_polar(const QMatrix& t, const PolarFactors& f, const QMatrix& v,
                      double tol = kDefaultRankTol);

// Pairs the k-th null basis vector with the k-th corange basis vector.
QMatrix canonical_perturbation(const QMatrix& t, double tol = kDefaultRankTol);

bool uniqueness_verdict(const QMatrix& t, double tol = kDefaultRankTol);

struct UniquenessWitness {
  PolarFactors factors;
  // Present exactly when the factorization is not unique.
  std::optional<QMatrix> v;
  std::optional<QMatrix> u;
};

UniquenessWitness uniqueness_witness(const QMatrix& t, double tol = kDefaultRankTol);

}  // namespace qpolar
