#pragma once

#include <stdexcept>
#include <string>

namespace guplab {

enum class ErrorKind {
  InvalidSample,
  InvalidArgument,
  NormalizationError,
  BoundaryMaximum,
  ExcessTruncation,
  DegenerateState,
  WindowTooSmall,
  BandLimitViolation,
  OutOfRange,
  DegenerateMeasurement,
  DomainError,
  ConjugacyError,
  ConfigError,
  TailTruncation,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// suite can record it as a per-cell status instead of aborting.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace guplab
