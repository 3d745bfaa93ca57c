#pragma once

// Text format for quaternion matrices:
//
//   # optional comment lines (and blank lines) anywhere
//   QMAT <rows> <cols>
//   <rows lines, each holding cols entries of four reals "w x y z">
//
// Emission uses 17 significant digits so parse(emit(A)) == A bit for bit.

#include <string>
#include <string_view>

#include "qpolar/qlinalg.hpp"

namespace qpolar {

// Throws ParseError with kind MalformedHeader, WrongEntryCount or BadNumber.
QMatrix parse_qmat(std::string_view text);
std::string emit_qmat(const QMatrix& a);

// Throws Error(Io) when the file cannot be read.
QMatrix read_qmat_file(const std::string& path);

}  // namespace qpolar
