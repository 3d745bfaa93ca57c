#pragma once

// Dense complex matrix kernel: Hermitian Jacobi eigensolver, one-sided
// Jacobi SVD, PSD square root, Moore-Penrose pseudoinverse and the classical
// polar decomposition. Everything quaternionic is computed through here.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "qpolar/quaternion.hpp"

namespace qpolar {

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Complex> data() const { return data_; }

  std::vector<Complex> column(std::size_t c) const;
  std::vector<Complex> operator*(std::span<const Complex> x) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(CMatrix a, Complex s);
CMatrix adjoint(const CMatrix& a);
CMatrix conj(const CMatrix& a);
double frobenius_norm(const CMatrix& a);
double max_abs_entry(const CMatrix& a);

struct EigResult {
  std::vector<double> values;  // descending
  CMatrix vectors;             // columns are eigenvectors
};

// Cyclic Jacobi. Throws NotHermitian when ||M - M*|| > tol ||M||.
EigResult hermitian_eig(const CMatrix& m, double tol = 1e-10);

struct SvdResult {
  std::vector<double> sigma;  // descending, one per column of M
  CMatrix u;                  // rows x rows unitary; first `rank` columns span R(M)
  CMatrix v;                  // cols x cols unitary; columns rank.. span N(M)
  std::size_t rank = 0;       // sigma_k > tol * sigma_max * max(rows, cols)
};

// One-sided (Hestenes) Jacobi on the columns of M.
SvdResult svd(const CMatrix& m, double tol = 1e-10);

double spectral_norm(const CMatrix& m);

// Eigenvalues with |lambda| <= tol ||M|| are treated as zero; anything more
// negative raises NegativeEigenvalue.
CMatrix psd_sqrt(const CMatrix& m, double tol = 1e-10);

// Inverse of a Hermitian positive definite matrix through its eigenbasis.
// Throws NotStrictlyPositive when lambda_min <= tol ||M||.
CMatrix hermitian_inverse(const CMatrix& m, double tol = 1e-10);

CMatrix pinv(const CMatrix& m, double tol = 1e-10);

struct ComplexPolar {
  CMatrix u0;  // partial isometry with N(U0) = N(M)
  CMatrix p;   // (M* M)^{1/2}
  std::size_t rank = 0;
};

ComplexPolar complex_polar(const CMatrix& m, double tol = 1e-10);

}  // namespace qpolar
