#include "qpolar/errors.hpp"

namespace qpolar {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotStrictlyPositive: return "NotStrictlyPositive";
    case ErrorKind::NotInPositiveSlice: return "NotInPositiveSlice";
    case ErrorKind::BlockStructureViolation: return "BlockStructureViolation";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::BadPerturbation: return "BadPerturbation";
    case ErrorKind::NormTooLarge: return "NormTooLarge";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::MalformedHeader: return "MalformedHeader";
    case ErrorKind::WrongEntryCount: return "WrongEntryCount";
    case ErrorKind::BadNumber: return "BadNumber";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace qpolar
