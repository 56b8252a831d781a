#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ffmt {

enum class ErrorCode {
  NotPrime,
  NotIrreducible,
  FieldTooLarge,
  DivisionByZero,
  FieldMismatch,
  SyntaxError,
  CoefficientOutOfRange,
  NotMonic,
  NotCoprime,
  BudgetExceeded,
  DegreeExceedsTable,
  PoolTooSmall,
  InvalidArgument,
  BadFile,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::CoefficientOutOfRange: return "CoefficientOutOfRange";
    case ErrorCode::NotMonic: return "NotMonic";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DegreeExceedsTable: return "DegreeExceedsTable";
    case ErrorCode::PoolTooSmall: return "PoolTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BadFile: return "BadFile";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace ffmt
