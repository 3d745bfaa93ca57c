#include "qpolar/quaternion.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace qpolar {

std::string to_string(const Quaternion& q) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g", q.w, q.x, q.y, q.z);
  return buf;
}

Quaternion parse_quaternion(std::string_view text) {
  std::array<double, 4> parts{};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    if (count == 4) throw std::invalid_argument("quaternion has more than four components");
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, parts[count]);
    if (ec != std::errc{} || ptr != last) {
      throw std::invalid_argument("bad quaternion component '" + std::string(text.substr(pos, end - pos)) + "'");
    }
    ++count;
    pos = end;
  }
  if (count != 4) throw std::invalid_argument("quaternion needs four components");
  return {parts[0], parts[1], parts[2], parts[3]};
}

}  // namespace qpolar
