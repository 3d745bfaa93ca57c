// qpolar command-line tool.
//
//   qpolar polar --in FILE [--tol T] [--out FILE]
//   qpolar verify --dim N --trials K --seed S [--tol T] [--threads P] [--out FILE]
//   qpolar example bounded|unbounded --n N
//
// QPOLAR_TOL supplies the tolerance when --tol is absent.
// Exit codes: 0 success, 2 bad input or configuration, 3 a check failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qpolar/qpolar.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCheck = 3;

int emit(char* text, const std::string& out_path) {
  int rc = kExitOk;
  if (out_path.empty()) {
    std::fputs(text, stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    out << text;
    if (!out) {
      std::fprintf(stderr, "qpolar: cannot write %s\n", out_path.c_str());
      rc = kExitInput;
    }
  }
  qp_string_free(text);
  return rc;
}

int report_error(qp_status s) {
  std::fprintf(stderr, "qpolar: %s: %s\n", qp_status_name(s), qp_last_error());
  return kExitInput;
}

int run_polar(const std::string& in, double tol, const std::string& out) {
  qp_matrix* t = nullptr;
  size_t line = 0;
  qp_status s = qp_matrix_read_file(in.c_str(), &t, &line);
  if (s != QP_OK) return report_error(s);

  char* text = nullptr;
  int ok = 0;
  s = qp_polar_report(t, tol, &text, &ok);
  qp_matrix_destroy(t);
  // The input parsed, so a numerical breakdown counts as a failed invariant.
  if (s != QP_OK) {
    report_error(s);
    return kExitCheck;
  }
  const int rc = emit(text, out);
  if (rc != kExitOk) return rc;
  return ok ? kExitOk : kExitCheck;
}

int run_verify(const qp_verify_config& cfg, const std::string& out) {
  char* text = nullptr;
  int ok = 0;
  const qp_status s = qp_verify_run(&cfg, &text, &ok);
  if (s != QP_OK) return report_error(s);
  const int rc = emit(text, out);
  if (rc != kExitOk) return rc;
  return ok ? kExitOk : kExitCheck;
}

int run_example(const std::string& which, size_t n) {
  char* text = nullptr;
  int ok = 0;
  const qp_example kind = which == "unbounded" ? QP_EXAMPLE_UNBOUNDED : QP_EXAMPLE_BOUNDED;
  const qp_status s = qp_example_run(kind, n, &text, &ok);
  if (s != QP_OK) return report_error(s);
  emit(text, {});
  return ok ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic polar decomposition and property verification"};
  app.require_subcommand(1);

  std::string in_path, out_path;
  double tol = 1e-10;

  auto* polar = app.add_subcommand("polar", "Polar decomposition of a QMAT file");
  polar->add_option("--in", in_path, "Input matrix file")->required();
  polar->add_option("--tol", tol, "Rank tolerance")->envname("QPOLAR_TOL");
  polar->add_option("--out", out_path, "Write the report here instead of stdout");

  qp_verify_config cfg{8, 100, 42, 1e-10, 1};
  auto* verify = app.add_subcommand("verify", "Run the randomized property batteries");
  verify->add_option("--dim", cfg.dim, "Largest dimension")->capture_default_str();
  verify->add_option("--trials", cfg.trials, "Trials per battery")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  verify->add_option("--tol", cfg.tol, "Rank tolerance")->envname("QPOLAR_TOL");
  verify->add_option("--threads", cfg.threads, "Worker threads (report is unaffected)")
      ->capture_default_str();
  verify->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string which;
  size_t n = 10;
  auto* example = app.add_subcommand("example", "Reproduce the weighted-shift examples");
  example->add_option("which", which, "bounded or unbounded")
      ->required()
      ->check(CLI::IsMember({"bounded", "unbounded"}));
  example->add_option("--n", n, "Truncation dimension")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (*polar) return run_polar(in_path, tol, out_path);
  if (*verify) return run_verify(cfg, out_path);
  return run_example(which, n);
}
