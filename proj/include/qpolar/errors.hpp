#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpolar {

enum class ErrorKind {
  LengthMismatch,
  DimensionMismatch,
  NotSquare,
  NotHermitian,
  NegativeEigenvalue,
  NotPositive,
  NotStrictlyPositive,
  NotInPositiveSlice,
  BlockStructureViolation,
  NotNormal,
  BadPerturbation,
  NormTooLarge,
  DimensionTooSmall,
  MalformedHeader,
  WrongEntryCount,
  BadNumber,
  InvalidConfig,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the 1-based line the problem was found on.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qpolar
