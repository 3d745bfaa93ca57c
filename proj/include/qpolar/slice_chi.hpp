#pragma once

// Slice structure of H^n for the standard anti-self-adjoint unitary J, the
// split A = A1 + A2 j of an operator into complex blocks, and the complex
// adjoint embedding chi(A) = [[A1, A2], [-conj(A2), conj(A1)]].
//
// Vectors embed as x = x1 + x2 j  ->  (x1, -conj(x2)), which makes
// embed(A x) = chi(A) embed(x) and carries N(A), R(A) and their orthogonal
// complements onto the corresponding subspaces of chi(A).

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "qpolar/complex_kernel.hpp"
#include "qpolar/qlinalg.hpp"

namespace qpolar {

// J x = (x1 - x2 j) i, which is entrywise left multiplication by i.
struct StandardJ {
  std::size_t n = 0;

  QVector apply(const QVector& x) const;
  QMatrix matrix() const;
};

// (p+, p-) with x = p+ + p-, J p+ = p+ i and J p- = -p- i.
std::pair<QVector, QVector> slice_project(const QVector& x);

// x -> x j, a conjugate-linear bijection H+ -> H-. Throws NotInPositiveSlice
// when x has a j-component above tol ||x||.
QVector anti_iso_phi(const QVector& x, double tol = 1e-12);

struct SliceSplit {
  CMatrix a1;
  CMatrix a2;
};

SliceSplit split_operator(const QMatrix& a);
QMatrix join_operator(const SliceSplit& s);

// The complex image is an ordinary CMatrix of shape 2 rows x 2 cols.
using ChiImage = CMatrix;

ChiImage chi(const QMatrix& a);

// Largest block defect max(||M21 + conj(M12)||, ||M22 - conj(M11)||).
double block_defect(const ChiImage& m);

// Inverse of chi on its image. Throws BlockStructureViolation when the block
// defect exceeds tol ||M||.
QMatrix chi_pullback(const ChiImage& m, double tol = 1e-10);

std::vector<Complex> embed_vector(const QVector& x);
QVector pullback_vector(std::span<const Complex> v);

// Same residual definitions as classify(QMatrix), evaluated on a complex matrix.
OperatorClass classify_complex(const CMatrix& m, double tol = kDefaultRankTol);

struct EquivalenceEntry {
  std::string name;
  bool quaternion_flag = false;
  double quaternion_residual = 0.0;
  bool chi_flag = false;
  double chi_residual = 0.0;
  bool agree = false;
};

struct EquivalenceReport {
  std::vector<EquivalenceEntry> entries;
  bool all_agree = true;
};

// Eight checks: chi(A*) = chi(A)*, then self-adjoint, positive, normal,
// unitary, anti-self-adjoint, projection and partial isometry on both sides.
EquivalenceReport equivalence_suite(const QMatrix& a, double tol = kDefaultRankTol);

}  // namespace qpolar
