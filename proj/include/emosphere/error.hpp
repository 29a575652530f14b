#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emosphere {

// Every failure the library reports carries one of these codes. The code name
// is what the CLI prints, so renaming one is a user-visible change.
enum class ErrorCode {
  MissingFile,
  IoFailure,
  MalformedRow,
  MalformedFile,
  UnsupportedVersion,
  DuplicateUttId,
  RangeViolation,
  EmptyDataset,
  NoNeutralRecords,
  DegenerateRadius,
  TooFewSamples,
  DegenerateScale,
  UnknownEmotion,
  OctantOutOfRange,
  LengthMismatch,
  DimensionMismatch,
  WindowTooLong,
  StartOutOfRange,
  ShapeMismatch,
  BatchMismatch,
  UnknownPreset,
  ZeroStyleVector,
  InvalidIntensity,
  InvalidArgument,
};

std::string_view error_name(ErrorCode code) noexcept;

// 1 for I/O and system failures, 2 for validation and domain errors.
int exit_code_for(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace emosphere
