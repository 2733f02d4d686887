#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ripple {

enum class ErrorCode {
  EmptyInput,
  DegenerateGeometry,
  EmptyAfterSanitize,
  TruncatedFace,
  UnknownToken,
  MissingSeparator,
  MalformedSequence,
  ShapeError,
  ConstraintViolation,
  SequenceClosed,
  RootOutOfRange,
  IoError,
  FormatError,
  InvalidArgument,
};

/// Stable name of an error code, e.g. "TruncatedFace". Bindings and logs
/// surface these names verbatim.
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ripple
