#include "ripple/error.hpp"

namespace ripple {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::EmptyAfterSanitize: return "EmptyAfterSanitize";
    case ErrorCode::TruncatedFace: return "TruncatedFace";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::MissingSeparator: return "MissingSeparator";
    case ErrorCode::MalformedSequence: return "MalformedSequence";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::SequenceClosed: return "SequenceClosed";
    case ErrorCode::RootOutOfRange: return "RootOutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace ripple
