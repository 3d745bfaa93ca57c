#include "qpolar/report.hpp"

#include <algorithm>
#include <cstdio>

namespace qpolar {

void Report::add(std::string name, double residual, double threshold) {
  checks_.push_back({std::move(name), residual, threshold, residual <= threshold});
}

void Report::add_flag(std::string name, bool ok) { add(std::move(name), ok ? 0.0 : 1.0, 0.0); }

void Report::append(const Report& other, std::string_view prefix) {
  for (const auto& c : other.checks_) {
    checks_.push_back({std::string(prefix) + c.name, c.residual, c.threshold, c.pass});
  }
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.pass; }));
}

std::string Report::render_checks() const {
  std::string out;
  char buf[96];
  for (const auto& c : checks_) {
    std::snprintf(buf, sizeof buf, " %.6e %.6e %s\n", c.residual, c.threshold, c.pass ? "PASS" : "FAIL");
    out += c.name;
    out += buf;
  }
  return out;
}

std::string Report::render_summary() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "summary checks=%zu passed=%zu failed=%zu\n", checks_.size(), passed(),
                failed());
  return buf;
}

}  // namespace qpolar
