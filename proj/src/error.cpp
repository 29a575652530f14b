#include "emosphere/error.hpp"

namespace emosphere {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MalformedFile: return "MalformedFile";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::DuplicateUttId: return "DuplicateUttId";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::NoNeutralRecords: return "NoNeutralRecords";
    case ErrorCode::DegenerateRadius: return "DegenerateRadius";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::DegenerateScale: return "DegenerateScale";
    case ErrorCode::UnknownEmotion: return "UnknownEmotion";
    case ErrorCode::OctantOutOfRange: return "OctantOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WindowTooLong: return "WindowTooLong";
    case ErrorCode::StartOutOfRange: return "StartOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BatchMismatch: return "BatchMismatch";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::ZeroStyleVector: return "ZeroStyleVector";
    case ErrorCode::InvalidIntensity: return "InvalidIntensity";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingFile:
    case ErrorCode::IoFailure:
      return 1;
    default:
      return 2;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code), detail_(detail) {}

}  // namespace emosphere
