#pragma once

#include <stdexcept>
#include <string>

namespace birkhoff {

enum class ErrorKind {
  InvalidArgument,
  NotTrapping,
  NoSeparation,
  NotHyperbolic,
  CurveComplexityOverflow,
  NotExact,
  MissingPrimitiveStep,
  WindowOverflow,
  EssentialClassNotFound,
  BackendLimit,
  NonSeparatingInput,
  TwistRequired,
  EmptySet,
  GridMismatch,
  Schema,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this exception type; `kind()`
// allows callers (and the CLI) to map failures onto diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace birkhoff
