#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qpolar {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;  // residual <= threshold; NaN never passes
};

// Line-oriented check list. Each check renders as
//   <name> <residual> <threshold> PASS|FAIL
// followed by a single "summary checks=<n> passed=<p> failed=<f>" line.
class Report {
 public:
  void add(std::string name, double residual, double threshold);
  // Boolean check: residual 0 when ok, 1 otherwise, threshold 0.
  void add_flag(std::string name, bool ok);
  void append(const Report& other, std::string_view prefix = {});

  const std::vector<CheckResult>& checks() const { return checks_; }
  std::size_t passed() const;
  std::size_t failed() const { return checks_.size() - passed(); }
  bool all_passed() const { return failed() == 0; }

  std::string render_checks() const;
  std::string render_summary() const;
  std::string render() const { return render_checks() + render_summary(); }

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace qpolar
