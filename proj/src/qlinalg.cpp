#include "qpolar/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "qpolar/errors.hpp"
#include "qpolar/slice_chi.hpp"

namespace qpolar {

namespace {

void require_same_length(const QVector& a, const QVector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "vector lengths differ");
}

void require_same_shape(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "quaternion matrix shapes differ");
  }
}

ClassFlag flag(double residual, double threshold) { return {residual <= threshold, residual}; }

// Fixed generic start vector for the power iteration.
QVector power_start(std::size_t n) {
  std::uint64_t state = 0x243F6A8885A308D3ull;
  auto next = [&state] {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return 0.5 + static_cast<double>(z >> 11) * 0x1.0p-53;
  };
  QVector x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = {next(), next() - 1.0, next(), next() - 1.0};
  return x * (1.0 / norm(x));
}

}  // namespace

QVector QVector::unit(std::size_t n, std::size_t k, Quaternion q) {
  QVector v(n);
  v[k] = q;
  return v;
}

QVector& QVector::operator+=(const QVector& o) {
  require_same_length(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

QVector& QVector::operator-=(const QVector& o) {
  require_same_length(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

QVector operator+(QVector a, const QVector& b) { return a += b; }
QVector operator-(QVector a, const QVector& b) { return a -= b; }

QVector operator*(const QVector& x, const Quaternion& q) {
  QVector y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] * q;
  return y;
}

QVector operator*(const QVector& x, double s) {
  QVector y(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] * s;
  return y;
}

Quaternion inner(const QVector& x, const QVector& y) {
  require_same_length(x, y);
  Quaternion acc;
  for (std::size_t k = 0; k < x.size(); ++k) acc += conj(x[k]) * y[k];
  return acc;
}

double norm(const QVector& x) {
  double s = 0.0;
  for (const auto& q : x.entries()) s += norm2(q);
  return std::sqrt(s);
}

QMatrix::QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = kOne;
  return m;
}

QMatrix QMatrix::diagonal(std::span<const Quaternion> d) {
  QMatrix m(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

QMatrix QMatrix::from_columns(std::span<const QVector> cols, std::size_t rows) {
  QMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw Error(ErrorKind::LengthMismatch, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

QVector QMatrix::column(std::size_t c) const {
  QVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

QVector QMatrix::operator*(const QVector& x) const {
  if (x.size() != cols_) throw Error(ErrorKind::LengthMismatch, "matrix-vector length mismatch");
  QVector y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Quaternion acc;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
  QMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Quaternion aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

QMatrix operator*(QMatrix a, double s) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) *= s;
  }
  return a;
}

QMatrix left_scale(const Quaternion& q, QMatrix a) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = q * a(r, c);
  }
  return a;
}

QMatrix adjoint(const QMatrix& a) {
  QMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = conj(a(r, c));
  }
  return t;
}

double frobenius_norm(const QMatrix& a) {
  double s = 0.0;
  for (const auto& q : a.data()) s += norm2(q);
  return std::sqrt(s);
}

double max_abs_entry(const QMatrix& a) {
  double m = 0.0;
  for (const auto& q : a.data()) m = std::max(m, abs(q));
  return m;
}

double operator_norm(const QMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0 || max_abs_entry(a) == 0.0) return 0.0;
  const QMatrix m = adjoint(a) * a;

  // Stop once ||M x - lambda x|| <= 1e-11 lambda; the Rayleigh quotient error is
  // then bounded by the same relative amount.
  auto converged = [&m](const QVector& x, double& lambda) {
    const QVector mx = m * x;
    lambda = inner(x, mx).w;
    return norm(mx - x * lambda) <= 1e-11 * lambda;
  };

  QVector x = power_start(a.cols());
  double lambda = 0.0;
  double best = 0.0;
  for (int it = 0; it < 500; ++it) {
    if (converged(x, lambda)) return std::sqrt(std::max(best, lambda));
    best = std::max(best, lambda);
    const QVector y = m * x;
    const double ny = norm(y);
    if (ny == 0.0) return std::sqrt(best);
    x = y * (1.0 / ny);
  }

  // Clustered top of the spectrum: iterate with M^1024 instead.
  QMatrix b = m * (1.0 / frobenius_norm(m));
  for (int s = 0; s < 10; ++s) {
    b = b * b;
    b = b * (1.0 / frobenius_norm(b));
  }
  for (int it = 0; it < 5000; ++it) {
    if (converged(x, lambda)) break;
    best = std::max(best, lambda);
    const QVector y = b * x;
    const double ny = norm(y);
    if (ny == 0.0) break;
    x = y * (1.0 / ny);
  }
  return std::sqrt(std::max(best, lambda));
}

std::vector<QVector> gram_schmidt(std::span<const QVector> vs, double tol) {
  std::vector<QVector> out;
  for (const auto& v : vs) {
    const double nv = norm(v);
    if (nv == 0.0) continue;
    QVector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : out) r -= u * inner(u, r);
    }
    const double nr = norm(r);
    if (nr <= tol * nv) continue;
    out.push_back(r * (1.0 / nr));
  }
  return out;
}

QMatrix projector(std::span<const QVector> basis, std::size_t n) {
  const QMatrix q = QMatrix::from_columns(basis, n);
  return q * adjoint(q);
}

QMatrix matrix_in_basis(const QMatrix& a, std::span<const QVector> basis) {
  if (!a.square()) throw Error(ErrorKind::NotSquare, "basis change needs a square operator");
  const QMatrix q = QMatrix::from_columns(basis, a.rows());
  return adjoint(q) * a * q;
}

NullRange null_range_bases(const QMatrix& a, double tol) {
  const SvdResult s = svd(chi(a), tol);
  std::vector<QVector> null_candidates;
  for (std::size_t k = s.rank; k < s.v.cols(); ++k) {
    const auto col = s.v.column(k);
    null_candidates.push_back(pullback_vector(col));
  }
  std::vector<QVector> range_candidates;
  for (std::size_t k = 0; k < s.rank; ++k) {
    const auto col = s.u.column(k);
    range_candidates.push_back(pullback_vector(col));
  }
  return {gram_schmidt(null_candidates, tol), gram_schmidt(range_candidates, tol)};
}

OperatorClass classify(const QMatrix& a, double tol) {
  if (!a.square()) throw Error(ErrorKind::NotSquare, "classification needs a square operator");
  const std::size_t n = a.rows();
  const QMatrix as = adjoint(a);
  const QMatrix id = QMatrix::identity(n);

  OperatorClass out;
  out.scale = std::max(1.0, operator_norm(a));
  const double thr = tol * out.scale;

  const double sa = operator_norm(a - as);
  out.self_adjoint = flag(sa, thr);
  out.anti_self_adjoint = flag(operator_norm(a + as), thr);

  double min_eig = 0.0;
  if (n > 0) min_eig = hermitian_eig(chi((a + as) * 0.5)).values.back();
  out.positive = flag(std::max(sa, std::max(0.0, -min_eig)), thr);

  const QMatrix asa = as * a;
  const QMatrix aas = a * as;
  out.normal = flag(operator_norm(asa - aas), thr);
  out.unitary = flag(std::max(operator_norm(asa - id), operator_norm(aas - id)), thr);
  out.projection = flag(std::max(operator_norm(a * a - a), sa), thr);

  // Spot check ||A f|| = ||f|| on an orthonormal basis of N(A)^perp = R(A*).
  double spot = 0.0;
  for (const auto& f : null_range_bases(as, tol).range_basis) {
    spot = std::max(spot, std::abs(norm(a * f) - 1.0));
  }
  out.partial_isometry = flag(std::max(operator_norm(asa * asa - asa), spot), thr);
  return out;
}

}  // namespace qpolar
