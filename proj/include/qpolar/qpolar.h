#ifndef QPOLAR_QPOLAR_H
#define QPOLAR_QPOLAR_H

/* C interface to the quaternion polar decomposition library.
 *
 * Matrices and factorizations are opaque handles owned by the caller and
 * released with the matching *_destroy function. Every call returns a
 * qp_status; QP_OK is zero. On failure qp_last_error() describes the most
 * recent error on the calling thread. Strings returned through char** are
 * allocated by the library and released with qp_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(QPOLAR_BUILDING)
#define QP_API __declspec(dllexport)
#else
#define QP_API __declspec(dllimport)
#endif
#else
#define QP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qp_status {
  QP_OK = 0,
  QP_ERR_NULL_ARGUMENT = 1,
  QP_ERR_OUT_OF_RANGE = 2,
  QP_ERR_LENGTH_MISMATCH = 3,
  QP_ERR_DIMENSION_MISMATCH = 4,
  QP_ERR_NOT_SQUARE = 5,
  QP_ERR_NOT_HERMITIAN = 6,
  QP_ERR_NEGATIVE_EIGENVALUE = 7,
  QP_ERR_NOT_POSITIVE = 8,
  QP_ERR_NOT_STRICTLY_POSITIVE = 9,
  QP_ERR_NOT_IN_POSITIVE_SLICE = 10,
  QP_ERR_BLOCK_STRUCTURE = 11,
  QP_ERR_NOT_NORMAL = 12,
  QP_ERR_BAD_PERTURBATION = 13,
  QP_ERR_NORM_TOO_LARGE = 14,
  QP_ERR_DIMENSION_TOO_SMALL = 15,
  QP_ERR_MALFORMED_HEADER = 16,
  QP_ERR_WRONG_ENTRY_COUNT = 17,
  QP_ERR_BAD_NUMBER = 18,
  QP_ERR_INVALID_CONFIG = 19,
  QP_ERR_IO = 20,
  QP_ERR_INTERNAL = 99
} qp_status;

typedef struct qp_matrix qp_matrix;
typedef struct qp_polar qp_polar;

typedef struct qp_quaternion {
  double w, x, y, z;
} qp_quaternion;

typedef struct qp_verify_config {
  size_t dim;
  size_t trials;
  uint64_t seed;
  double tol;
  size_t threads;
} qp_verify_config;

typedef enum qp_example { QP_EXAMPLE_BOUNDED = 0, QP_EXAMPLE_UNBOUNDED = 1 } qp_example;

QP_API const char* qp_last_error(void);
QP_API const char* qp_status_name(qp_status status);
QP_API void qp_string_free(char* s);

/* matrices */
QP_API qp_status qp_matrix_create(size_t rows, size_t cols, qp_matrix** out);
QP_API qp_status qp_matrix_identity(size_t n, qp_matrix** out);
QP_API void qp_matrix_destroy(qp_matrix* m);
QP_API size_t qp_matrix_rows(const qp_matrix* m);
QP_API size_t qp_matrix_cols(const qp_matrix* m);
QP_API qp_status qp_matrix_get(const qp_matrix* m, size_t r, size_t c, qp_quaternion* out);
QP_API qp_status qp_matrix_set(qp_matrix* m, size_t r, size_t c, qp_quaternion q);

/* text format; err_line (may be NULL) receives the offending line number */
QP_API qp_status qp_matrix_parse(const char* text, size_t len, qp_matrix** out, size_t* err_line);
QP_API qp_status qp_matrix_read_file(const char* path, qp_matrix** out, size_t* err_line);
QP_API qp_status qp_matrix_emit(const qp_matrix* m, char** out);

/* operators */
QP_API qp_status qp_operator_norm(const qp_matrix* m, double* out);
QP_API qp_status qp_modulus(const qp_matrix* t, double tol, qp_matrix** out);
QP_API qp_status qp_sqrt_positive(const qp_matrix* p, double tol, qp_matrix** out);
QP_API qp_status qp_z_transform(const qp_matrix* t, double tol, qp_matrix** out);
QP_API qp_status qp_z_inverse(const qp_matrix* z, double tol, qp_matrix** out);

/* polar decomposition */
QP_API qp_status qp_polar_decompose(const qp_matrix* t, double tol, qp_polar** out);
QP_API void qp_polar_destroy(qp_polar* p);
/* Copies of the factors; the caller owns the returned matrices. */
QP_API qp_status qp_polar_u0(const qp_polar* p, qp_matrix** out);
QP_API qp_status qp_polar_abs(const qp_polar* p, qp_matrix** out);
QP_API size_t qp_polar_rank(const qp_polar* p);
QP_API size_t qp_polar_null_rank(const qp_polar* p);
QP_API size_t qp_polar_corange_rank(const qp_polar* p);
QP_API int qp_polar_unique(const qp_polar* p);
/* U = U0 + V P_{N(T)} for an admissible V. */
QP_API qp_status qp_polar_perturb(const qp_matrix* t, const qp_polar* p, const qp_matrix* v, double tol,
                                  qp_matrix** out);

/* Reports. *all_passed (may be NULL) is set to 1 when every check passes. */
QP_API qp_status qp_polar_report(const qp_matrix* t, double tol, char** report, int* all_passed);
QP_API qp_status qp_verify_run(const qp_verify_config* cfg, char** report, int* all_passed);
QP_API qp_status qp_example_run(qp_example which, size_t n, char** report, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif
