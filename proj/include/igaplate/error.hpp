#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace igaplate {

enum class ErrorCode {
  DecreasingKnots,
  NotOpen,
  ExcessMultiplicity,
  OutOfDomain,
  MultiplicityOverflow,
  ReproductionFailure,
  DimensionMismatch,
  InvalidMaterial,
  DegreeTooLow,
  DegenerateJacobian,
  NonPositiveDiagonal,
  SingularShearBlock,
  NonConformingInterface,
  SingularMatrix,
  UnknownGeometry,
  ParseError,
  InvalidGeometry,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace igaplate
