#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace emosphere {

/// One utterance's arousal/valence/dominance pseudo-label, as produced by an
/// external speech emotion recognizer.
struct AvdRecord {
  std::string utt_id;
  std::string speaker_id;
  std::string emotion;
  double arousal = 0.0;
  double valence = 0.0;
  double dominance = 0.0;

  bool operator==(const AvdRecord&) const = default;
};

inline constexpr std::string_view kNeutralLabel = "neutral";

// Recognizer outputs sit roughly in [0, 1]; anything outside this envelope
// is rejected in strict mode and clamped in lenient mode.
inline constexpr double kEnvelopeLo = -0.25;
inline constexpr double kEnvelopeHi = 1.25;

struct Dataset {
  std::vector<AvdRecord> records;
  std::set<std::string> emotions_present;

  bool operator==(const Dataset&) const = default;
};

enum class RecordFormat { csv, jsonl };
enum class ValidationMode { strict, lenient };

struct ParseResult {
  Dataset dataset;
  std::size_t clamped_values = 0;   // lenient mode only
  std::size_t clamped_records = 0;
};

inline constexpr std::string_view kCsvHeader = "utt_id,speaker_id,emotion,arousal,valence,dominance";

/// Reads a CSV or JSONL pseudo-label file. Throws emosphere::Error with
/// MissingFile, MalformedRow, DuplicateUttId, RangeViolation or EmptyDataset.
ParseResult parse_records(const std::filesystem::path& path, RecordFormat format, ValidationMode mode);

/// Same as parse_records, over in-memory text.
ParseResult parse_records_text(std::string_view text, RecordFormat format, ValidationMode mode);

/// Serializes a dataset in the given format with round-trip exact numbers.
std::string serialize_records(const Dataset& dataset, RecordFormat format);

/// Builds a Dataset from records, enforcing utt_id uniqueness.
Dataset make_dataset(std::vector<AvdRecord> records);

RecordFormat format_from_name(std::string_view name);
RecordFormat format_from_extension(const std::filesystem::path& path);

}  // namespace emosphere
