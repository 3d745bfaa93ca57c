#include "qpolar/bounded_transform.hpp"

#include <cmath>
#include <string>

#include "qpolar/errors.hpp"
#include "qpolar/polar.hpp"

namespace qpolar {

namespace {

void require_example_dimension(std::size_t n) {
  if (n < 7) {
    throw Error(ErrorKind::DimensionTooSmall,
                "truncation needs N >= 7, got " + std::to_string(n));
  }
}

// M^{-1/2} for strictly positive M, as the square root of the explicit inverse.
QMatrix inverse_root(const QMatrix& shifted, double tol) {
  return sqrt_positive_spectral(inverse_positive(shifted, tol), tol);
}

}  // namespace

QMatrix z_transform(const QMatrix& t, double tol) {
  const QMatrix shifted = QMatrix::identity(t.cols()) + adjoint(t) * t;
  return t * inverse_root(shifted, tol);
}

QMatrix z_inverse(const QMatrix& z, double tol) {
  const double nz = operator_norm(z);
  if (nz >= 1.0 - tol) {
    throw Error(ErrorKind::NormTooLarge,
                "||Z|| = " + std::to_string(nz) + " leaves no bounded preimage");
  }
  const QMatrix shifted = QMatrix::identity(z.cols()) - adjoint(z) * z;
  return z * inverse_root(shifted, tol);
}

QMatrix truncated_bounded_example(std::size_t n) {
  require_example_dimension(n);
  QMatrix a(n, n);
  const double half = 1.0 / std::sqrt(2.0);
  a(1, 0) = half;
  a(3, 1) = half;
  for (std::size_t k = 6; k <= n; ++k) {
    const double kd = static_cast<double>(k);
    a(k - 1, k - 1) = kd / std::sqrt(kd * kd + 1.0);
  }
  return a;
}

QMatrix example_perturbation(std::size_t n) {
  require_example_dimension(n);
  QMatrix v(n, n);
  v(0, 2) = kOne;
  v(2, 3) = kOne;
  v(4, 4) = kOne;
  return v;
}

QMatrix example_u0(std::size_t n) {
  require_example_dimension(n);
  QMatrix u(n, n);
  u(1, 0) = kOne;
  u(3, 1) = kOne;
  for (std::size_t k = 5; k < n; ++k) u(k, k) = kOne;
  return u;
}

std::pair<TruncatedWeightOp, QMatrix> truncated_example(std::size_t n, double tol) {
  require_example_dimension(n);
  TruncatedWeightOp s{n, QMatrix(n, n)};
  s.op(1, 0) = kOne;
  s.op(3, 1) = kOne;
  for (std::size_t k = 6; k <= n; ++k) s.op(k - 1, k - 1) = static_cast<double>(k);
  QMatrix z = z_transform(s.op, tol);
  return {std::move(s), std::move(z)};
}

}  // namespace qpolar
