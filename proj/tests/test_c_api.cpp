// Exercises the shared library through its C header only.

#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "qpolar/qpolar.h"

TEST_CASE("matrix handles") {
  qp_matrix* m = nullptr;
  REQUIRE(qp_matrix_create(2, 3, &m) == QP_OK);
  CHECK(qp_matrix_rows(m) == 2);
  CHECK(qp_matrix_cols(m) == 3);
  CHECK(qp_matrix_set(m, 1, 2, qp_quaternion{0, 0, 1, 0}) == QP_OK);
  qp_quaternion q{};
  CHECK(qp_matrix_get(m, 1, 2, &q) == QP_OK);
  CHECK(q.y == 1.0);
  CHECK(qp_matrix_get(m, 2, 0, &q) == QP_ERR_OUT_OF_RANGE);
  CHECK(qp_matrix_get(nullptr, 0, 0, &q) == QP_ERR_NULL_ARGUMENT);
  qp_matrix_destroy(m);
  qp_matrix_destroy(nullptr);
}

TEST_CASE("parse errors carry status and line") {
  qp_matrix* m = nullptr;
  size_t line = 0;
  const char* bad = "QMAT 1 1\n0 0 1";
  CHECK(qp_matrix_parse(bad, std::strlen(bad), &m, &line) == QP_ERR_WRONG_ENTRY_COUNT);
  CHECK(line == 2);
  CHECK(std::string(qp_last_error()).find("line 2") != std::string::npos);
  CHECK(std::string(qp_status_name(QP_ERR_WRONG_ENTRY_COUNT)) == "WrongEntryCount");

  const char* good = "QMAT 1 1\n0 0 1 0";
  REQUIRE(qp_matrix_parse(good, std::strlen(good), &m, &line) == QP_OK);
  char* text = nullptr;
  REQUIRE(qp_matrix_emit(m, &text) == QP_OK);
  CHECK(std::string(text) == "QMAT 1 1\n0 0 1 0\n");
  qp_string_free(text);
  qp_matrix_destroy(m);

  CHECK(qp_matrix_read_file("/nonexistent/x.qmat", &m, &line) == QP_ERR_IO);
}

TEST_CASE("polar through handles") {
  qp_matrix* t = nullptr;
  REQUIRE(qp_matrix_create(2, 2, &t) == QP_OK);
  qp_matrix_set(t, 0, 0, qp_quaternion{0, 0, 1, 0});
  qp_polar* p = nullptr;
  REQUIRE(qp_polar_decompose(t, 1e-10, &p) == QP_OK);
  CHECK(qp_polar_rank(p) == 1);
  CHECK(qp_polar_null_rank(p) == 1);
  CHECK(qp_polar_corange_rank(p) == 1);
  CHECK(qp_polar_unique(p) == 0);

  qp_matrix* u0 = nullptr;
  qp_matrix* abs_t = nullptr;
  REQUIRE(qp_polar_u0(p, &u0) == QP_OK);
  REQUIRE(qp_polar_abs(p, &abs_t) == QP_OK);
  qp_quaternion q{};
  qp_matrix_get(u0, 0, 0, &q);
  CHECK(q.y == doctest::Approx(1.0));
  qp_matrix_get(abs_t, 0, 0, &q);
  CHECK(q.w == doctest::Approx(1.0));

  // N(T) = R(T)^perp = span{e2}: V = e1 e2* lands in R(T) and is rejected,
  // V = e2 e2* is admissible.
  qp_matrix* v = nullptr;
  qp_matrix_create(2, 2, &v);
  qp_matrix_set(v, 0, 1, qp_quaternion{1, 0, 0, 0});
  qp_matrix* u = nullptr;
  CHECK(qp_polar_perturb(t, p, v, 1e-10, &u) == QP_ERR_BAD_PERTURBATION);
  qp_matrix_set(v, 0, 1, qp_quaternion{0, 0, 0, 0});
  qp_matrix_set(v, 1, 1, qp_quaternion{1, 0, 0, 0});
  REQUIRE(qp_polar_perturb(t, p, v, 1e-10, &u) == QP_OK);
  qp_matrix_get(u, 1, 1, &q);
  CHECK(q.w == doctest::Approx(1.0));

  qp_matrix_destroy(u);
  qp_matrix_destroy(v);
  qp_matrix_destroy(u0);
  qp_matrix_destroy(abs_t);
  qp_polar_destroy(p);
  qp_matrix_destroy(t);
}

TEST_CASE("transforms and norms") {
  qp_matrix* t = nullptr;
  qp_matrix_create(1, 1, &t);
  qp_matrix_set(t, 0, 0, qp_quaternion{6, 0, 0, 0});
  qp_matrix* z = nullptr;
  REQUIRE(qp_z_transform(t, 1e-10, &z) == QP_OK);
  double nz = 0;
  REQUIRE(qp_operator_norm(z, &nz) == QP_OK);
  CHECK(std::abs(nz - 6 / std::sqrt(37.0)) < 1e-14);
  qp_matrix* back = nullptr;
  REQUIRE(qp_z_inverse(z, 1e-10, &back) == QP_OK);
  qp_quaternion q{};
  qp_matrix_get(back, 0, 0, &q);
  CHECK(std::abs(q.w - 6) < 1e-10);

  qp_matrix* id = nullptr;
  qp_matrix_identity(2, &id);
  qp_matrix* bad = nullptr;
  CHECK(qp_z_inverse(id, 1e-10, &bad) == QP_ERR_NORM_TOO_LARGE);
  qp_matrix* root = nullptr;
  CHECK(qp_sqrt_positive(id, 1e-10, &root) == QP_OK);
  qp_matrix* mod = nullptr;
  CHECK(qp_modulus(id, 1e-10, &mod) == QP_OK);

  qp_matrix_destroy(mod);
  qp_matrix_destroy(root);
  qp_matrix_destroy(id);
  qp_matrix_destroy(back);
  qp_matrix_destroy(z);
  qp_matrix_destroy(t);
}

TEST_CASE("reports") {
  char* text = nullptr;
  int ok = 0;
  REQUIRE(qp_example_run(QP_EXAMPLE_BOUNDED, 10, &text, &ok) == QP_OK);
  CHECK(ok == 1);
  CHECK(std::string(text).find("u_e4_is_e3") != std::string::npos);
  qp_string_free(text);
  CHECK(qp_example_run(QP_EXAMPLE_UNBOUNDED, 5, &text, &ok) == QP_ERR_DIMENSION_TOO_SMALL);

  qp_verify_config cfg{2, 2, 3, 1e-10, 1};
  REQUIRE(qp_verify_run(&cfg, &text, &ok) == QP_OK);
  CHECK(ok == 1);
  qp_string_free(text);
  cfg.trials = 0;
  CHECK(qp_verify_run(&cfg, &text, &ok) == QP_ERR_INVALID_CONFIG);

  qp_matrix* id = nullptr;
  qp_matrix_identity(3, &id);
  REQUIRE(qp_polar_report(id, 1e-10, &text, &ok) == QP_OK);
  CHECK(ok == 1);
  CHECK(std::string(text).find("unique true") != std::string::npos);
  qp_string_free(text);
  qp_matrix_destroy(id);
}
