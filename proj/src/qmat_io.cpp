#include "qpolar/qmat_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "qpolar/errors.hpp"

namespace qpolar {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool significant(const std::vector<std::string_view>& tokens) {
  return !tokens.empty() && tokens.front().front() != '#';
}

std::size_t parse_dimension(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0) {
    throw ParseError(ErrorKind::MalformedHeader, line,
                     "bad dimension '" + std::string(token) + "' in QMAT header");
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError(ErrorKind::BadNumber, line, "bad number '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

QMatrix parse_qmat(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  std::size_t row = 0;
  QMatrix a;

  while (pos <= text.size()) {
    // A final newline terminates the last line rather than opening a new one.
    if (pos == text.size() && pos > 0) break;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    const auto tokens = tokenize(line);
    if (!significant(tokens)) {
      if (end == text.size()) break;
      continue;
    }
    if (!have_header) {
      if (tokens.size() != 3 || tokens[0] != "QMAT") {
        throw ParseError(ErrorKind::MalformedHeader, line_no, "expected 'QMAT <rows> <cols>'");
      }
      const std::size_t rows = parse_dimension(tokens[1], line_no);
      const std::size_t cols = parse_dimension(tokens[2], line_no);
      a = QMatrix(rows, cols);
      have_header = true;
    } else {
      if (row == a.rows()) {
        throw ParseError(ErrorKind::WrongEntryCount, line_no, "more rows than the header declares");
      }
      if (tokens.size() != 4 * a.cols()) {
        throw ParseError(ErrorKind::WrongEntryCount, line_no,
                         "expected " + std::to_string(4 * a.cols()) + " reals (" +
                             std::to_string(a.cols()) + " entries), found " +
                             std::to_string(tokens.size()));
      }
      for (std::size_t c = 0; c < a.cols(); ++c) {
        a(row, c) = {parse_real(tokens[4 * c], line_no), parse_real(tokens[4 * c + 1], line_no),
                     parse_real(tokens[4 * c + 2], line_no), parse_real(tokens[4 * c + 3], line_no)};
      }
      ++row;
    }
    if (end == text.size()) break;
  }

  if (!have_header) throw ParseError(ErrorKind::MalformedHeader, line_no, "missing QMAT header");
  if (row != a.rows()) {
    throw ParseError(ErrorKind::WrongEntryCount, line_no + 1,
                     "expected " + std::to_string(a.rows()) + " rows, found " + std::to_string(row));
  }
  return a;
}

std::string emit_qmat(const QMatrix& a) {
  std::string out = "QMAT " + std::to_string(a.rows()) + " " + std::to_string(a.cols()) + "\n";
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (c) out += "  ";
      out += to_string(a(r, c));
    }
    out += '\n';
  }
  return out;
}

QMatrix read_qmat_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_qmat(buf.str());
}

}  // namespace qpolar
