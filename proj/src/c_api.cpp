#include "qpolar/qpolar.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "qpolar/bounded_transform.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/polar.hpp"
#include "qpolar/qmat_io.hpp"
#include "qpolar/verify.hpp"

struct qp_matrix {
  qpolar::QMatrix m;
};

struct qp_polar {
  qpolar::PolarFactors f;
};

namespace {

thread_local std::string g_last_error;

qp_status status_of(qpolar::ErrorKind kind) {
  using qpolar::ErrorKind;
  switch (kind) {
    case ErrorKind::LengthMismatch: return QP_ERR_LENGTH_MISMATCH;
    case ErrorKind::DimensionMismatch: return QP_ERR_DIMENSION_MISMATCH;
    case ErrorKind::NotSquare: return QP_ERR_NOT_SQUARE;
    case ErrorKind::NotHermitian: return QP_ERR_NOT_HERMITIAN;
    case ErrorKind::NegativeEigenvalue: return QP_ERR_NEGATIVE_EIGENVALUE;
    case ErrorKind::NotPositive: return QP_ERR_NOT_POSITIVE;
    case ErrorKind::NotStrictlyPositive: return QP_ERR_NOT_STRICTLY_POSITIVE;
    case ErrorKind::NotInPositiveSlice: return QP_ERR_NOT_IN_POSITIVE_SLICE;
    case ErrorKind::BlockStructureViolation: return QP_ERR_BLOCK_STRUCTURE;
    case ErrorKind::NotNormal: return QP_ERR_NOT_NORMAL;
    case ErrorKind::BadPerturbation: return QP_ERR_BAD_PERTURBATION;
    case ErrorKind::NormTooLarge: return QP_ERR_NORM_TOO_LARGE;
    case ErrorKind::DimensionTooSmall: return QP_ERR_DIMENSION_TOO_SMALL;
    case ErrorKind::MalformedHeader: return QP_ERR_MALFORMED_HEADER;
    case ErrorKind::WrongEntryCount: return QP_ERR_WRONG_ENTRY_COUNT;
    case ErrorKind::BadNumber: return QP_ERR_BAD_NUMBER;
    case ErrorKind::InvalidConfig: return QP_ERR_INVALID_CONFIG;
    case ErrorKind::Io: return QP_ERR_IO;
  }
  return QP_ERR_INTERNAL;
}

qp_status fail(qp_status s, const char* what) {
  g_last_error = what;
  return s;
}

// Runs f and converts exceptions into status codes.
template <class F>
qp_status guarded(F&& f, std::size_t* err_line = nullptr) noexcept {
  try {
    g_last_error.clear();
    f();
    return QP_OK;
  } catch (const qpolar::ParseError& e) {
    if (err_line) *err_line = e.line();
    return fail(status_of(e.kind()), e.what());
  } catch (const qpolar::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QP_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qp_matrix* wrap(qpolar::QMatrix m) { return new qp_matrix{std::move(m)}; }

#define QP_REQUIRE(cond)                                              \
  do {                                                                \
    if (!(cond)) return fail(QP_ERR_NULL_ARGUMENT, "null argument"); \
  } while (0)

}  // namespace

extern "C" {

const char* qp_last_error(void) { return g_last_error.c_str(); }

const char* qp_status_name(qp_status status) {
  switch (status) {
    case QP_OK: return "ok";
    case QP_ERR_NULL_ARGUMENT: return "null argument";
    case QP_ERR_OUT_OF_RANGE: return "index out of range";
    case QP_ERR_INTERNAL: return "internal error";
    default: break;
  }
  for (int k = 0; k <= static_cast<int>(qpolar::ErrorKind::Io); ++k) {
    const auto kind = static_cast<qpolar::ErrorKind>(k);
    if (status_of(kind) == status) return qpolar::to_string(kind);
  }
  return "unknown status";
}

void qp_string_free(char* s) { std::free(s); }

qp_status qp_matrix_create(size_t rows, size_t cols, qp_matrix** out) {
  QP_REQUIRE(out);
  return guarded([&] { *out = wrap(qpolar::QMatrix(rows, cols)); });
}

qp_status qp_matrix_identity(size_t n, qp_matrix** out) {
  QP_REQUIRE(out);
  return guarded([&] { *out = wrap(qpolar::QMatrix::identity(n)); });
}

void qp_matrix_destroy(qp_matrix* m) { delete m; }

size_t qp_matrix_rows(const qp_matrix* m) { return m ? m->m.rows() : 0; }

size_t qp_matrix_cols(const qp_matrix* m) { return m ? m->m.cols() : 0; }

qp_status qp_matrix_get(const qp_matrix* m, size_t r, size_t c, qp_quaternion* out) {
  QP_REQUIRE(m && out);
  if (r >= m->m.rows() || c >= m->m.cols()) return fail(QP_ERR_OUT_OF_RANGE, "index out of range");
  const qpolar::Quaternion& q = m->m(r, c);
  *out = qp_quaternion{q.w, q.x, q.y, q.z};
  return QP_OK;
}

qp_status qp_matrix_set(qp_matrix* m, size_t r, size_t c, qp_quaternion q) {
  QP_REQUIRE(m);
  if (r >= m->m.rows() || c >= m->m.cols()) return fail(QP_ERR_OUT_OF_RANGE, "index out of range");
  m->m(r, c) = qpolar::Quaternion{q.w, q.x, q.y, q.z};
  return QP_OK;
}

qp_status qp_matrix_parse(const char* text, size_t len, qp_matrix** out, size_t* err_line) {
  QP_REQUIRE(text && out);
  if (err_line) *err_line = 0;
  return guarded([&] { *out = wrap(qpolar::parse_qmat(std::string_view(text, len))); }, err_line);
}

qp_status qp_matrix_read_file(const char* path, qp_matrix** out, size_t* err_line) {
  QP_REQUIRE(path && out);
  if (err_line) *err_line = 0;
  return guarded([&] { *out = wrap(qpolar::read_qmat_file(path)); }, err_line);
}

qp_status qp_matrix_emit(const qp_matrix* m, char** out) {
  QP_REQUIRE(m && out);
  return guarded([&] { *out = dup_string(qpolar::emit_qmat(m->m)); });
}

qp_status qp_operator_norm(const qp_matrix* m, double* out) {
  QP_REQUIRE(m && out);
  return guarded([&] { *out = qpolar::operator_norm(m->m); });
}

qp_status qp_modulus(const qp_matrix* t, double tol, qp_matrix** out) {
  QP_REQUIRE(t && out);
  return guarded([&] { *out = wrap(qpolar::modulus(t->m, tol)); });
}

qp_status qp_sqrt_positive(const qp_matrix* p, double tol, qp_matrix** out) {
  QP_REQUIRE(p && out);
  return guarded([&] { *out = wrap(qpolar::sqrt_positive_spectral(p->m, tol)); });
}

qp_status qp_z_transform(const qp_matrix* t, double tol, qp_matrix** out) {
  QP_REQUIRE(t && out);
  return guarded([&] { *out = wrap(qpolar::z_transform(t->m, tol)); });
}

qp_status qp_z_inverse(const qp_matrix* z, double tol, qp_matrix** out) {
  QP_REQUIRE(z && out);
  return guarded([&] { *out = wrap(qpolar::z_inverse(z->m, tol)); });
}

qp_status qp_polar_decompose(const qp_matrix* t, double tol, qp_polar** out) {
  QP_REQUIRE(t && out);
  return guarded([&] { *out = new qp_polar{qpolar::polar_decompose(t->m, tol)}; });
}

void qp_polar_destroy(qp_polar* p) { delete p; }

qp_status qp_polar_u0(const qp_polar* p, qp_matrix** out) {
  QP_REQUIRE(p && out);
  return guarded([&] { *out = wrap(p->f.u0); });
}

qp_status qp_polar_abs(const qp_polar* p, qp_matrix** out) {
  QP_REQUIRE(p && out);
  return guarded([&] { *out = wrap(p->f.abs_t); });
}

size_t qp_polar_rank(const qp_polar* p) { return p ? p->f.rank : 0; }

size_t qp_polar_null_rank(const qp_polar* p) { return p ? p->f.null_rank : 0; }

size_t qp_polar_corange_rank(const qp_polar* p) { return p ? p->f.corange_rank : 0; }

int qp_polar_unique(const qp_polar* p) { return p && p->f.unique ? 1 : 0; }

qp_status qp_polar_perturb(const qp_matrix* t, const qp_polar* p, const qp_matrix* v, double tol,
                           qp_matrix** out) {
  QP_REQUIRE(t && p && v && out);
  return guarded([&] { *out = wrap(qpolar::perturb_polar(t->m, p->f, v->m, tol)); });
}

qp_status qp_polar_report(const qp_matrix* t, double tol, char** report, int* all_passed) {
  QP_REQUIRE(t && report);
  return guarded([&] {
    const qpolar::PolarRun run = qpolar::run_polar(t->m, tol);
    *report = dup_string(run.text);
    if (all_passed) *all_passed = run.report.all_passed() ? 1 : 0;
  });
}

qp_status qp_verify_run(const qp_verify_config* cfg, char** report, int* all_passed) {
  QP_REQUIRE(cfg && report);
  return guarded([&] {
    qpolar::SuiteConfig c;
    c.dim = cfg->dim;
    c.trials = cfg->trials;
    c.seed = cfg->seed;
    c.tol = cfg->tol;
    c.threads = cfg->threads;
    c.validate();
    const qpolar::Report r = qpolar::run_verify(c);
    *report = dup_string(qpolar::render_verify(c, r));
    if (all_passed) *all_passed = r.all_passed() ? 1 : 0;
  });
}

qp_status qp_example_run(qp_example which, size_t n, char** report, int* all_passed) {
  QP_REQUIRE(report);
  return guarded([&] {
    const auto kind = which == QP_EXAMPLE_UNBOUNDED ? qpolar::ExampleKind::Unbounded
                                                    : qpolar::ExampleKind::Bounded;
    const qpolar::Report r = qpolar::run_example(kind, n);
    *report = dup_string(qpolar::render_example(kind, n, r));
    if (all_passed) *all_passed = r.all_passed() ? 1 : 0;
  });
}

}  // extern "C"
