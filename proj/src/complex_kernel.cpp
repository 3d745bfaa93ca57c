#include "qpolar/complex_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qpolar/errors.hpp"

namespace qpolar {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "complex matrix shapes differ");
  }
}

struct Rotation {
  double c;
  double s;
  Complex phase;  // unit complex e with a_pq = |a_pq| e
};

// Unitary G acting on columns p, q that annihilates the (p, q) entry of the
// Hermitian 2x2 block [[app, apq], [conj(apq), aqq]] under G* (.) G.
Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double g = std::abs(apq);
  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  Complex e = apq / g;
  e /= std::abs(e);  // apq may be subnormal
  return {c, t * c, e};
}

void rotate_columns(CMatrix& a, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex ce = std::conj(r.phase);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = r.c * akp - r.s * ce * akq;
    a(k, q) = r.s * akp + r.c * ce * akq;
  }
}

void rotate_rows(CMatrix& a, std::size_t p, std::size_t q, const Rotation& r) {
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = r.c * apk - r.s * r.phase * aqk;
    a(q, k) = r.s * apk + r.c * r.phase * aqk;
  }
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (r != c) s += std::norm(a(r, c));
    }
  }
  return std::sqrt(s);
}

std::vector<std::size_t> descending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

// Completes the first `have` orthonormal columns of u to a unitary matrix by
// repeatedly taking the standard basis vector with the largest residual.
void complete_basis(CMatrix& u, std::size_t have) {
  const std::size_t m = u.rows();
  std::vector<bool> used(m, false);
  for (std::size_t next = have; next < m; ++next) {
    std::vector<Complex> best;
    double best_norm = -1.0;
    std::size_t best_index = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      std::vector<Complex> r(m, Complex{});
      r[i] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < next; ++k) {
          Complex d{};
          for (std::size_t t = 0; t < m; ++t) d += std::conj(u(t, k)) * r[t];
          for (std::size_t t = 0; t < m; ++t) r[t] -= u(t, k) * d;
        }
      }
      double nr = 0.0;
      for (const auto& v : r) nr += std::norm(v);
      nr = std::sqrt(nr);
      if (nr > best_norm) {
        best_norm = nr;
        best = std::move(r);
        best_index = i;
      }
    }
    used[best_index] = true;
    for (std::size_t t = 0; t < m; ++t) u(t, next) = best[t] / best_norm;
  }
}

}  // namespace

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

std::vector<Complex> CMatrix::column(std::size_t c) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<Complex> CMatrix::operator*(std::span<const Complex> x) const {
  if (x.size() != cols_) throw Error(ErrorKind::LengthMismatch, "matrix-vector length mismatch");
  std::vector<Complex> y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require_same_shape(*this, o);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

CMatrix operator*(CMatrix a, Complex s) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) *= s;
  }
  return a;
}

CMatrix adjoint(const CMatrix& a) {
  CMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = std::conj(a(r, c));
  }
  return t;
}

CMatrix conj(const CMatrix& a) {
  CMatrix t(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(r, c) = std::conj(a(r, c));
  }
  return t;
}

double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  for (const auto& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs_entry(const CMatrix& a) {
  double m = 0.0;
  for (const auto& v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

EigResult hermitian_eig(const CMatrix& m, double tol) {
  if (!m.square()) throw Error(ErrorKind::NotSquare, "hermitian_eig needs a square matrix");
  const std::size_t n = m.rows();
  const double scale = frobenius_norm(m);
  if (frobenius_norm(m - adjoint(m)) > tol * scale) {
    throw Error(ErrorKind::NotHermitian, "matrix is not Hermitian within tolerance");
  }
  CMatrix a = (m + adjoint(m)) * 0.5;
  CMatrix v = CMatrix::identity(n);

  constexpr int kMaxSweeps = 30;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-14 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        if (std::abs(apq) == 0.0) continue;
        const Rotation r = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, r);
      }
    }
  }

  std::vector<double> diag(n);
  for (std::size_t k = 0; k < n; ++k) diag[k] = a(k, k).real();
  const auto order = descending_order(diag);
  EigResult out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = diag[order[k]];
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

SvdResult svd(const CMatrix& m, double tol) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  CMatrix w = m;
  CMatrix v = CMatrix::identity(cols);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) total += std::norm(m(r, c));
  }
  // Columns at rounding level of the whole matrix carry no direction worth rotating.
  const double floor = 1e-32 * total;

  constexpr int kMaxSweeps = 60;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma{};
        for (std::size_t k = 0; k < rows; ++k) {
          alpha += std::norm(w(k, p));
          beta += std::norm(w(k, q));
          gamma += std::conj(w(k, p)) * w(k, q);
        }
        const double g = std::abs(gamma);
        if (g <= floor || g <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, p, q, r);
        rotate_columns(v, p, q, r);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> norms(cols);
  for (std::size_t k = 0; k < cols; ++k) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += std::norm(w(r, k));
    norms[k] = std::sqrt(s);
  }
  const auto order = descending_order(norms);

  SvdResult out;
  out.sigma.resize(cols);
  out.v = CMatrix(cols, cols);
  for (std::size_t k = 0; k < cols; ++k) {
    out.sigma[k] = norms[order[k]];
    for (std::size_t r = 0; r < cols; ++r) out.v(r, k) = v(r, order[k]);
  }
  const double smax = cols ? out.sigma[0] : 0.0;
  const double cutoff = tol * smax * static_cast<double>(std::max(rows, cols));
  std::size_t rank = 0;
  while (rank < cols && rank < rows && out.sigma[rank] > cutoff && out.sigma[rank] > 0.0) ++rank;
  out.rank = rank;

  out.u = CMatrix(rows, rows);
  for (std::size_t k = 0; k < rank; ++k) {
    for (std::size_t r = 0; r < rows; ++r) out.u(r, k) = w(r, order[k]) / out.sigma[k];
  }
  complete_basis(out.u, rank);
  return out;
}

double spectral_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return svd(m).sigma.front();
}

CMatrix psd_sqrt(const CMatrix& m, double tol) {
  const EigResult e = hermitian_eig(m, tol);
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (double lambda : e.values) scale = std::max(scale, std::abs(lambda));
  std::vector<double> roots(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = e.values[k];
    if (lambda < -tol * scale) {
      throw Error(ErrorKind::NegativeEigenvalue,
                  "eigenvalue " + std::to_string(lambda) + " below the clamping window");
    }
    roots[k] = lambda <= tol * scale ? 0.0 : std::sqrt(lambda);
  }
  CMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) {
        acc += e.vectors(i, k) * roots[k] * std::conj(e.vectors(j, k));
      }
      r(i, j) = acc;
    }
  }
  return (r + adjoint(r)) * 0.5;
}

CMatrix hermitian_inverse(const CMatrix& m, double tol) {
  const EigResult e = hermitian_eig(m, tol);
  const std::size_t n = m.rows();
  double scale = 0.0;
  for (double lambda : e.values) scale = std::max(scale, std::abs(lambda));
  CMatrix r(n, n);
  if (n == 0) return r;
  if (e.values.back() <= tol * scale) {
    throw Error(ErrorKind::NotStrictlyPositive, "matrix is not positive definite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) {
        acc += e.vectors(i, k) * (1.0 / e.values[k]) * std::conj(e.vectors(j, k));
      }
      r(i, j) = acc;
    }
  }
  return (r + adjoint(r)) * 0.5;
}

CMatrix pinv(const CMatrix& m, double tol) {
  const SvdResult s = svd(m, tol);
  CMatrix x(m.cols(), m.rows());
  for (std::size_t k = 0; k < s.rank; ++k) {
    const double inv = 1.0 / s.sigma[k];
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const Complex vik = s.v(i, k) * inv;
      for (std::size_t j = 0; j < m.rows(); ++j) x(i, j) += vik * std::conj(s.u(j, k));
    }
  }
  return x;
}

ComplexPolar complex_polar(const CMatrix& m, double tol) {
  const SvdResult s = svd(m, tol);
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  ComplexPolar out{CMatrix(rows, cols), CMatrix(cols, cols), s.rank};
  for (std::size_t k = 0; k < s.rank; ++k) {
    for (std::size_t i = 0; i < rows; ++i) {
      const Complex uik = s.u(i, k);
      for (std::size_t j = 0; j < cols; ++j) out.u0(i, j) += uik * std::conj(s.v(j, k));
    }
  }
  for (std::size_t k = 0; k < cols; ++k) {
    if (s.sigma[k] == 0.0) continue;
    for (std::size_t i = 0; i < cols; ++i) {
      const Complex vik = s.v(i, k) * s.sigma[k];
      for (std::size_t j = 0; j < cols; ++j) out.p(i, j) += vik * std::conj(s.v(j, k));
    }
  }
  out.p = (out.p + adjoint(out.p)) * 0.5;
  return out;
}

}  // namespace qpolar
