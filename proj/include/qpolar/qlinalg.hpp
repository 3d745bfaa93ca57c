#pragma once

// Right H-module vectors and right H-linear operators on H^n.
//
// Scalars act on the right of vectors (x * q) and matrices act by left
// multiplication, so A(x q + y) = (A x) q + A y. The inner product is
// <x|y> = sum_k conj(x_k) y_k: conjugate-linear in the first slot,
// right-linear in the second.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "qpolar/quaternion.hpp"

namespace qpolar {

inline constexpr double kDefaultRankTol = 1e-10;

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : data_(n) {}
  QVector(std::initializer_list<Quaternion> init) : data_(init) {}
  explicit QVector(std::vector<Quaternion> data) : data_(std::move(data)) {}

  static QVector unit(std::size_t n, std::size_t k, Quaternion q = kOne);

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  Quaternion& operator[](std::size_t k) { return data_[k]; }
  const Quaternion& operator[](std::size_t k) const { return data_[k]; }
  std::span<const Quaternion> entries() const { return data_; }

  QVector& operator+=(const QVector& o);
  QVector& operator-=(const QVector& o);

  friend bool operator==(const QVector&, const QVector&) = default;

 private:
  std::vector<Quaternion> data_;
};

QVector operator+(QVector a, const QVector& b);
QVector operator-(QVector a, const QVector& b);
// Right scalar multiplication x * q.
QVector operator*(const QVector& x, const Quaternion& q);
QVector operator*(const QVector& x, double s);

Quaternion inner(const QVector& x, const QVector& y);
double norm(const QVector& x);

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows);

  static QMatrix identity(std::size_t n);
  static QMatrix diagonal(std::span<const Quaternion> d);
  // Columns are the given vectors, all of length rows.
  static QMatrix from_columns(std::span<const QVector> cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Quaternion& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Quaternion> data() const { return data_; }

  QVector column(std::size_t c) const;
  QVector operator*(const QVector& x) const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Quaternion> data_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(const QMatrix& a, const QMatrix& b);
QMatrix operator*(QMatrix a, double s);
// Entrywise left multiplication (q A)x = q (A x); stays right H-linear.
QMatrix left_scale(const Quaternion& q, QMatrix a);

QMatrix adjoint(const QMatrix& a);
double frobenius_norm(const QMatrix& a);
double max_abs_entry(const QMatrix& a);

// sqrt(lambda_max(A* A)) by power iteration in quaternion arithmetic.
double operator_norm(const QMatrix& a);

// Modified Gram-Schmidt with a second re-orthogonalization pass. A vector
// whose residual falls below tol times its input norm is dropped.
std::vector<QVector> gram_schmidt(std::span<const QVector> vs, double tol = kDefaultRankTol);

// Orthogonal projector Q Q* onto the span of an orthonormal list.
QMatrix projector(std::span<const QVector> basis, std::size_t n);

// Matrix of A in the orthonormal basis {f_k}: entries <f_r | A f_s>.
QMatrix matrix_in_basis(const QMatrix& a, std::span<const QVector> basis);

struct NullRange {
  std::vector<QVector> null_basis;   // orthonormal basis of N(A), in H^cols
  std::vector<QVector> range_basis;  // orthonormal basis of R(A), in H^rows
};

// Computed through the complex adjoint image and pulled back.
NullRange null_range_bases(const QMatrix& a, double tol = kDefaultRankTol);

struct ClassFlag {
  bool value = false;
  double residual = 0.0;
};

struct OperatorClass {
  ClassFlag self_adjoint;
  ClassFlag anti_self_adjoint;
  ClassFlag positive;
  ClassFlag normal;
  ClassFlag unitary;
  ClassFlag projection;
  ClassFlag partial_isometry;
  double scale = 1.0;  // max(1, ||A||); residuals are compared against tol * scale
};

// Residuals are operator norms of the defining defects. Requires a square A.
OperatorClass classify(const QMatrix& a, double tol = kDefaultRankTol);

}  // namespace qpolar
