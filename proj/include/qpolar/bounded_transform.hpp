#pragma once

// Bounded transform Z_T = T (I + T*T)^{-1/2} and its inverse
// T = Z (I - Z*Z)^{-1/2}, plus finite truncations of the diagonal-weight
// operators used to illustrate non-unique polar factors.

#include <cstddef>
#include <utility>

#include "qpolar/qlinalg.hpp"

namespace qpolar {

QMatrix z_transform(const QMatrix& t, double tol = kDefaultRankTol);

// Throws NormTooLarge when ||Z|| >= 1 - tol; such a Z has no bounded preimage.
QMatrix z_inverse(const QMatrix& z, double tol = kDefaultRankTol);

// S_N on H^N: S e1 = e2, S e2 = e4, S e3 = S e4 = S e5 = 0, S ek = ek k for k >= 6.
struct TruncatedWeightOp {
  std::size_t n = 0;
  QMatrix op;
};

// A_N: A e1 = e2/sqrt2, A e2 = e4/sqrt2, A e3 = A e4 = A e5 = 0,
// A ek = ek k/sqrt(k^2+1) for k >= 6. Equals Z_{S_N}.
QMatrix truncated_bounded_example(std::size_t n);

// V(e3 a + e4 b + e5 c) = e1 a + e3 b + e5 c, zero on span{e3, e4, e5}^perp.
QMatrix example_perturbation(std::size_t n);

// The polar factor of A_N: U0 e1 = e2, U0 e2 = e4, U0 ek = ek for k >= 6.
QMatrix example_u0(std::size_t n);

// Returns S_N and Z_{S_N}. Throws DimensionTooSmall for n < 7.
std::pair<TruncatedWeightOp, QMatrix> truncated_example(std::size_t n, double tol = kDefaultRankTol);

}  // namespace qpolar
