#include "qpolar/polar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpolar/complex_kernel.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/slice_chi.hpp"

namespace qpolar {

namespace {

// Pullback tolerance for matrices produced by a square root or inverse in the
// complex image.
constexpr double kImagePullbackTol = 1e-8;

void require_square(const QMatrix& p, const char* what) {
  if (!p.square()) throw Error(ErrorKind::NotSquare, std::string(what) + " needs a square operator");
}

EigResult positive_spectrum(const QMatrix& p, double tol, ErrorKind kind) {
  try {
    return hermitian_eig(chi(p), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotHermitian) throw Error(kind, "operator is not self-adjoint");
    throw;
  }
}

QMatrix symmetrized(const QMatrix& a) { return (a + adjoint(a)) * 0.5; }

}  // namespace

QMatrix sqrt_positive_spectral(const QMatrix& p, double tol) {
  require_square(p, "square root");
  CMatrix root;
  try {
    root = psd_sqrt(chi(p), tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotHermitian || e.kind() == ErrorKind::NegativeEigenvalue) {
      throw Error(ErrorKind::NotPositive, std::string("operator is not positive: ") + e.what());
    }
    throw;
  }
  return chi_pullback(root, kImagePullbackTol);
}

QMatrix inverse_positive(const QMatrix& p, double tol) {
  require_square(p, "inverse");
  return chi_pullback(hermitian_inverse(chi(p), tol), kImagePullbackTol);
}

QMatrix sqrt_strictly_positive(const QMatrix& p, double lambda_min, double tol) {
  require_square(p, "square root");
  if (!(lambda_min > 0.0)) {
    throw Error(ErrorKind::NotStrictlyPositive, "lambda_min must be positive");
  }
  const EigResult e = positive_spectrum(p, tol, ErrorKind::NotStrictlyPositive);
  if (!e.values.empty() && e.values.back() < lambda_min) {
    throw Error(ErrorKind::NotStrictlyPositive,
                "smallest eigenvalue " + std::to_string(e.values.back()) + " is below lambda_min");
  }
  const QMatrix inverse = inverse_positive(p, tol);
  const QMatrix inverse_root = sqrt_positive_spectral(inverse, tol);
  return symmetrized(inverse_positive(inverse_root, tol));
}

QMatrix sqrt_positive_wouk(const QMatrix& p, double tol) {
  require_square(p, "square root");
  const EigResult e = positive_spectrum(p, tol, ErrorKind::NotPositive);
  double scale = 0.0;
  for (double lambda : e.values) scale = std::max(scale, std::abs(lambda));
  if (!e.values.empty() && e.values.back() < -tol * scale) {
    throw Error(ErrorKind::NotPositive, "operator has a negative eigenvalue");
  }
  const QMatrix id = QMatrix::identity(p.rows());
  const QMatrix shifted = id + p;
  // ||(I + P)x|| >= ||x||, so the strictly positive construction applies with
  // any lambda_min below 1.
  const QMatrix c = sqrt_strictly_positive(shifted, 0.5, tol);
  const QMatrix s = symmetrized(id - inverse_positive(shifted, tol));
  const QMatrix s_root = sqrt_positive_spectral(s, tol);
  return symmetrized(s_root * c);
}

QMatrix modulus(const QMatrix& t, double tol) {
  return chi_pullback(complex_polar(chi(t), tol).p, kImagePullbackTol);
}

PolarFactors polar_decompose(const QMatrix& t, double tol) {
  const ComplexPolar cp = complex_polar(chi(t), tol);
  PolarFactors f;
  f.u0 = chi_pullback(cp.u0, kImagePullbackTol);
  f.abs_t = chi_pullback(cp.p, kImagePullbackTol);
  // Every quaternionic singular value appears twice in chi(T).
  f.rank = cp.rank / 2;
  f.null_rank = t.cols() - f.rank;
  f.corange_rank = t.rows() - f.rank;
  f.unique = f.null_rank == 0 || f.corange_rank == 0;
  return f;
}

Report polar_checks(const QMatrix& t, const PolarFactors& f, double threshold, double tol) {
  Report r;
  const double scale = std::max(1.0, operator_norm(t));
  const QMatrix us = adjoint(f.u0);
  const QMatrix& abs_t = f.abs_t;

  r.add("reconstruction", operator_norm(f.u0 * abs_t - t) / scale, threshold);
  r.add("identity_u0s_u0_abs", operator_norm(us * f.u0 * abs_t - abs_t) / scale, threshold);
  r.add("identity_u0s_t", operator_norm(us * t - abs_t) / scale, threshold);
  r.add("identity_u0_u0s_t", operator_norm(f.u0 * us * t - t) / scale, threshold);

  double min_eig = 0.0;
  if (abs_t.rows() > 0) min_eig = hermitian_eig(chi(symmetrized(abs_t))).values.back();
  r.add("abs_positive",
        std::max(operator_norm(abs_t - adjoint(abs_t)), std::max(0.0, -min_eig)) / scale, threshold);

  const QMatrix g = us * f.u0;
  r.add("u0_partial_isometry", operator_norm(g * g - g), threshold);

  const auto null_t = null_range_bases(t, tol).null_basis;
  const auto null_u0 = null_range_bases(f.u0, tol).null_basis;
  r.add_flag("null_rank_match", null_t.size() == null_u0.size() && null_t.size() == f.null_rank);
  double annihilation = 0.0;
  for (const auto& v : null_t) annihilation = std::max(annihilation, norm(f.u0 * v));
  for (const auto& v : null_u0) annihilation = std::max(annihilation, norm(t * v) / scale);
  r.add("null_annihilation", annihilation, threshold);
  return r;
}

Report structure_report(const QMatrix& t, const PolarFactors& f, double threshold, double tol) {
  Report r;
  const OperatorClass c = classify(t, tol);
  const QMatrix us = adjoint(f.u0);
  if (c.normal.value) {
    r.add("normal_u0_normal", operator_norm(us * f.u0 - f.u0 * us), threshold);
    r.add("normal_u0_commutes_abs", operator_norm(f.u0 * f.abs_t - f.abs_t * f.u0) / c.scale,
          threshold);
    const auto range = null_range_bases(t, tol).range_basis;
    double unitary_defect = 0.0;
    if (!range.empty()) {
      const QMatrix q = QMatrix::from_columns(range, t.rows());
      const QMatrix block = adjoint(q) * f.u0 * q;
      unitary_defect =
          std::max(operator_norm(adjoint(block) * block - QMatrix::identity(range.size())),
                   operator_norm(f.u0 * q - q * block));
    }
    r.add("normal_u0_unitary_on_range", unitary_defect, threshold);
  }
  if (c.self_adjoint.value) r.add("self_adjoint_u0", operator_norm(f.u0 - us), threshold);
  if (c.anti_self_adjoint.value) r.add("anti_self_adjoint_u0", operator_norm(f.u0 + us), threshold);
  return r;
}

QMatrix unitary_extension(const QMatrix& t, const PolarFactors& f, double tol) {
  require_square(t, "unitary extension");
  if (!classify(t, tol).normal.value) throw Error(ErrorKind::NotNormal, "operator is not normal");
  const auto null = null_range_bases(t, tol).null_basis;
  return f.u0 + projector(null, t.cols());
}

QMatrix perturb_polar(const QMatrix& t, const PolarFactors& f, const QMatrix& v, double tol) {
  if (v.rows() != t.rows() || v.cols() != t.cols()) {
    throw Error(ErrorKind::BadPerturbation, "perturbation has the wrong shape");
  }
  const NullRange nr = null_range_bases(t, tol);
  const QMatrix p_null = projector(nr.null_basis, t.cols());
  const QMatrix p_range = projector(nr.range_basis, t.rows());
  const double thr = tol * std::max(1.0, operator_norm(v));

  if (operator_norm(v - v * p_null) > thr) {
    throw Error(ErrorKind::BadPerturbation, "V does not vanish on N(T)^perp");
  }
  if (operator_norm(p_range * v) > thr) {
    throw Error(ErrorKind::BadPerturbation, "V does not map into R(T)^perp");
  }
  const QMatrix g = adjoint(v) * v;
  if (operator_norm(g * g - g) > thr) {
    throw Error(ErrorKind::BadPerturbation, "V is not a partial isometry");
  }
  return f.u0 + v * p_null;
}

QMatrix canonical_perturbation(const QMatrix& t, double tol) {
  const auto null = null_range_bases(t, tol).null_basis;
  const auto corange = null_range_bases(adjoint(t), tol).null_basis;
  QMatrix v(t.rows(), t.cols());
  const std::size_t pairs = std::min(null.size(), corange.size());
  for (std::size_t k = 0; k < pairs; ++k) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
      for (std::size_t c = 0; c < t.cols(); ++c) v(r, c) += corange[k][r] * conj(null[k][c]);
    }
  }
  return v;
}

bool uniqueness_verdict(const QMatrix& t, double tol) { return polar_decompose(t, tol).unique; }

UniquenessWitness uniqueness_witness(const QMatrix& t, double tol) {
  UniquenessWitness w{polar_decompose(t, tol), std::nullopt, std::nullopt};
  if (!w.factors.unique) {
    QMatrix v = canonical_perturbation(t, tol);
    w.u = perturb_polar(t, w.factors, v, tol);
    w.v = std::move(v);
  }
  return w;
}

}  // namespace qpolar
