#include "qpolar/slice_chi.hpp"

#include <algorithm>
#include <cmath>

#include "qpolar/errors.hpp"

namespace qpolar {

namespace {

ClassFlag flag(double residual, double threshold) { return {residual <= threshold, residual}; }

double min_eigenvalue_of_symmetric_part(const CMatrix& m) {
  const CMatrix sym = (m + adjoint(m)) * 0.5;
  if (sym.rows() == 0) return 0.0;
  return hermitian_eig(sym).values.back();
}

}  // namespace

QVector StandardJ::apply(const QVector& x) const {
  if (x.size() != n) throw Error(ErrorKind::LengthMismatch, "J dimension mismatch");
  QVector y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexPair p = split(x[k]);
    y[k] = join({p.alpha, -p.beta}) * kI;
  }
  return y;
}

QMatrix StandardJ::matrix() const {
  QMatrix j(n, n);
  for (std::size_t k = 0; k < n; ++k) j(k, k) = kI;
  return j;
}

std::pair<QVector, QVector> slice_project(const QVector& x) {
  QVector plus(x.size());
  QVector minus(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    plus[k] = {x[k].w, x[k].x, 0.0, 0.0};
    minus[k] = {0.0, 0.0, x[k].y, x[k].z};
  }
  return {plus, minus};
}

QVector anti_iso_phi(const QVector& x, double tol) {
  const auto [plus, minus] = slice_project(x);
  if (norm(minus) > tol * norm(x)) {
    throw Error(ErrorKind::NotInPositiveSlice, "vector has a component outside H+");
  }
  return plus * kJ;
}

SliceSplit split_operator(const QMatrix& a) {
  SliceSplit s{CMatrix(a.rows(), a.cols()), CMatrix(a.rows(), a.cols())};
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const ComplexPair p = split(a(r, c));
      s.a1(r, c) = p.alpha;
      s.a2(r, c) = p.beta;
    }
  }
  return s;
}

QMatrix join_operator(const SliceSplit& s) {
  if (s.a1.rows() != s.a2.rows() || s.a1.cols() != s.a2.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "slice blocks differ in shape");
  }
  QMatrix a(s.a1.rows(), s.a1.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = join({s.a1(r, c), s.a2(r, c)});
  }
  return a;
}

ChiImage chi(const QMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ChiImage out(2 * m, 2 * n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const ComplexPair p = split(a(r, c));
      out(r, c) = p.alpha;
      out(r, n + c) = p.beta;
      out(m + r, c) = -std::conj(p.beta);
      out(m + r, n + c) = std::conj(p.alpha);
    }
  }
  return out;
}

double block_defect(const ChiImage& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) return INFINITY;
  const std::size_t h = m.rows() / 2;
  const std::size_t w = m.cols() / 2;
  double lower_left = 0.0;
  double lower_right = 0.0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      lower_left += std::norm(m(h + r, c) + std::conj(m(r, w + c)));
      lower_right += std::norm(m(h + r, w + c) - std::conj(m(r, c)));
    }
  }
  return std::max(std::sqrt(lower_left), std::sqrt(lower_right));
}

QMatrix chi_pullback(const ChiImage& m, double tol) {
  const double defect = block_defect(m);
  if (!(defect <= tol * frobenius_norm(m))) {
    throw Error(ErrorKind::BlockStructureViolation,
                "matrix is not in the image of chi (block defect " + std::to_string(defect) + ")");
  }
  const std::size_t h = m.rows() / 2;
  const std::size_t w = m.cols() / 2;
  QMatrix a(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const Complex a1 = (m(r, c) + std::conj(m(h + r, w + c))) * 0.5;
      const Complex a2 = (m(r, w + c) - std::conj(m(h + r, c))) * 0.5;
      a(r, c) = join({a1, a2});
    }
  }
  return a;
}

std::vector<Complex> embed_vector(const QVector& x) {
  const std::size_t n = x.size();
  std::vector<Complex> v(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const ComplexPair p = split(x[k]);
    v[k] = p.alpha;
    v[n + k] = -std::conj(p.beta);
  }
  return v;
}

QVector pullback_vector(std::span<const Complex> v) {
  if (v.size() % 2 != 0) throw Error(ErrorKind::LengthMismatch, "embedded vector has odd length");
  const std::size_t n = v.size() / 2;
  QVector x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = join({v[k], -std::conj(v[n + k])});
  return x;
}

OperatorClass classify_complex(const CMatrix& m, double tol) {
  if (!m.square()) throw Error(ErrorKind::NotSquare, "classification needs a square operator");
  const std::size_t n = m.rows();
  const CMatrix ms = adjoint(m);
  const CMatrix id = CMatrix::identity(n);
  const SvdResult s = svd(m, tol);
  const double norm_m = n ? s.sigma.front() : 0.0;

  OperatorClass out;
  out.scale = std::max(1.0, norm_m);
  const double thr = tol * out.scale;

  const double sa = spectral_norm(m - ms);
  out.self_adjoint = flag(sa, thr);
  out.anti_self_adjoint = flag(spectral_norm(m + ms), thr);
  out.positive = flag(std::max(sa, std::max(0.0, -min_eigenvalue_of_symmetric_part(m))), thr);
  const CMatrix msm = ms * m;
  const CMatrix mms = m * ms;
  out.normal = flag(spectral_norm(msm - mms), thr);
  out.unitary = flag(std::max(spectral_norm(msm - id), spectral_norm(mms - id)), thr);
  out.projection = flag(std::max(spectral_norm(m * m - m), sa), thr);

  double spot = 0.0;
  for (std::size_t k = 0; k < s.rank; ++k) {
    const auto col = s.v.column(k);
    const auto image = m * col;
    double nrm = 0.0;
    for (const auto& e : image) nrm += std::norm(e);
    spot = std::max(spot, std::abs(std::sqrt(nrm) - 1.0));
  }
  out.partial_isometry = flag(std::max(spectral_norm(msm * msm - msm), spot), thr);
  return out;
}

EquivalenceReport equivalence_suite(const QMatrix& a, double tol) {
  const OperatorClass q = classify(a, tol);
  const ChiImage ca = chi(a);
  const OperatorClass c = classify_complex(ca, tol);

  EquivalenceReport report;
  auto add = [&](const std::string& name, ClassFlag qf, ClassFlag cf) {
    EquivalenceEntry e{name, qf.value, qf.residual, cf.value, cf.residual, qf.value == cf.value};
    report.all_agree = report.all_agree && e.agree;
    report.entries.push_back(std::move(e));
  };

  const double adj_residual = max_abs_entry(chi(adjoint(a)) - adjoint(ca));
  add("adjoint_compat", {true, 0.0}, flag(adj_residual, tol * c.scale));
  add("self_adjoint", q.self_adjoint, c.self_adjoint);
  add("positive", q.positive, c.positive);
  add("normal", q.normal, c.normal);
  add("unitary", q.unitary, c.unitary);
  add("anti_self_adjoint", q.anti_self_adjoint, c.anti_self_adjoint);
  add("projection", q.projection, c.projection);
  add("partial_isometry", q.partial_isometry, c.partial_isometry);
  return report;
}

}  // namespace qpolar
