#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace birdeg {

enum class ErrorKind {
  ArityMismatch,
  ZeroPolynomial,
  DivisionByZero,
  NotHomogeneous,
  DimensionMismatch,
  CrossCheckMismatch,
  ResidualCommonFactor,
  IncompleteFactorList,
  NotInverse,
  UnexplainedFactor,
  NotContractedToPoint,
  TargetMismatch,
  ZeroComposition,
  InvalidChart,
  InvalidDescriptor,
  NonGenericInput,
  UnknownFixture,
  ParseError,
  Usage,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::CrossCheckMismatch: return "CrossCheckMismatch";
    case ErrorKind::ResidualCommonFactor: return "ResidualCommonFactor";
    case ErrorKind::IncompleteFactorList: return "IncompleteFactorList";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::UnexplainedFactor: return "UnexplainedFactor";
    case ErrorKind::NotContractedToPoint: return "NotContractedToPoint";
    case ErrorKind::TargetMismatch: return "TargetMismatch";
    case ErrorKind::ZeroComposition: return "ZeroComposition";
    case ErrorKind::InvalidChart: return "InvalidChart";
    case ErrorKind::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorKind::NonGenericInput: return "NonGenericInput";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// callers (tests, the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace birdeg
