#include "emosphere/avd.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <unordered_set>

#include <json.hpp>

#include "emosphere/error.hpp"
#include "emosphere/io.hpp"

namespace emosphere {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

Error malformed(std::size_t line, const std::string& why) {
  return Error(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + why);
}

// Splits text into physical lines, dropping a UTF-8 BOM and CR line endings.
std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

class RecordSink {
 public:
  explicit RecordSink(ValidationMode mode) : mode_(mode) {}

  void add(AvdRecord rec, std::size_t line) {
    if (rec.utt_id.empty()) throw malformed(line, "empty utt_id");
    check_field(rec, rec.arousal, "arousal");
    check_field(rec, rec.valence, "valence");
    check_field(rec, rec.dominance, "dominance");
    if (!seen_.insert(rec.utt_id).second) throw Error(ErrorCode::DuplicateUttId, rec.utt_id);
    if (record_clamped_) ++result_.clamped_records;
    record_clamped_ = false;
    result_.dataset.emotions_present.insert(rec.emotion);
    result_.dataset.records.push_back(std::move(rec));
  }

  ParseResult finish() && {
    if (result_.dataset.records.empty()) throw Error(ErrorCode::EmptyDataset, "no records");
    return std::move(result_);
  }

 private:
  void check_field(const AvdRecord& rec, double& value, std::string_view field) {
    if (value >= kEnvelopeLo && value <= kEnvelopeHi) return;
    if (mode_ == ValidationMode::strict) {
      throw Error(ErrorCode::RangeViolation, rec.utt_id + " " + std::string(field) + "=" + format_double(value));
    }
    value = std::clamp(value, kEnvelopeLo, kEnvelopeHi);
    ++result_.clamped_values;
    record_clamped_ = true;
  }

  ValidationMode mode_;
  ParseResult result_;
  std::unordered_set<std::string> seen_;
  bool record_clamped_ = false;
};

ParseResult parse_csv(std::string_view text, ValidationMode mode) {
  const auto lines = split_lines(text);
  RecordSink sink(mode);
  bool have_header = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    if (trim(line).empty()) continue;
    if (!have_header) {
      if (trim(line) != kCsvHeader) throw malformed(line_no, "expected header '" + std::string(kCsvHeader) + "'");
      have_header = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 6) throw malformed(line_no, "expected 6 fields, got " + std::to_string(fields.size()));
    AvdRecord rec;
    rec.utt_id = std::string(trim(fields[0]));
    rec.speaker_id = std::string(trim(fields[1]));
    rec.emotion = std::string(trim(fields[2]));
    const auto a = parse_real(fields[3]);
    const auto v = parse_real(fields[4]);
    const auto d = parse_real(fields[5]);
    if (!a) throw malformed(line_no, "arousal is not a finite number");
    if (!v) throw malformed(line_no, "valence is not a finite number");
    if (!d) throw malformed(line_no, "dominance is not a finite number");
    rec.arousal = *a;
    rec.valence = *v;
    rec.dominance = *d;
    sink.add(std::move(rec), line_no);
  }
  if (!have_header) throw Error(ErrorCode::EmptyDataset, "no header and no records");
  return std::move(sink).finish();
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) throw malformed(line, std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

double require_number(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) throw malformed(line, std::string("missing numeric field '") + key + "'");
  const double value = it->get<double>();
  if (!std::isfinite(value)) throw malformed(line, std::string(key) + " is not finite");
  return value;
}

ParseResult parse_jsonl(std::string_view text, ValidationMode mode) {
  const auto lines = split_lines(text);
  RecordSink sink(mode);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    const json obj = json::parse(lines[i], nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) throw malformed(line_no, "not a JSON object");
    AvdRecord rec;
    rec.utt_id = require_string(obj, "utt_id", line_no);
    rec.speaker_id = require_string(obj, "speaker_id", line_no);
    rec.emotion = require_string(obj, "emotion", line_no);
    rec.arousal = require_number(obj, "arousal", line_no);
    rec.valence = require_number(obj, "valence", line_no);
    rec.dominance = require_number(obj, "dominance", line_no);
    sink.add(std::move(rec), line_no);
  }
  return std::move(sink).finish();
}

void check_csv_safe(const std::string& field) {
  if (field.find_first_of(",\r\n") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "field '" + field + "' cannot be written as CSV");
  }
}

}  // namespace

ParseResult parse_records_text(std::string_view text, RecordFormat format, ValidationMode mode) {
  return format == RecordFormat::csv ? parse_csv(text, mode) : parse_jsonl(text, mode);
}

ParseResult parse_records(const std::filesystem::path& path, RecordFormat format, ValidationMode mode) {
  return parse_records_text(read_file(path), format, mode);
}

std::string serialize_records(const Dataset& dataset, RecordFormat format) {
  std::string out;
  if (format == RecordFormat::csv) {
    out.append(kCsvHeader).push_back('\n');
    for (const auto& r : dataset.records) {
      check_csv_safe(r.utt_id);
      check_csv_safe(r.speaker_id);
      check_csv_safe(r.emotion);
      out += r.utt_id + ',' + r.speaker_id + ',' + r.emotion + ',' + format_double(r.arousal) + ',' +
             format_double(r.valence) + ',' + format_double(r.dominance) + '\n';
    }
    return out;
  }
  for (const auto& r : dataset.records) {
    nlohmann::ordered_json row;
    row["utt_id"] = r.utt_id;
    row["speaker_id"] = r.speaker_id;
    row["emotion"] = r.emotion;
    row["arousal"] = r.arousal;
    row["valence"] = r.valence;
    row["dominance"] = r.dominance;
    out += row.dump() + '\n';
  }
  return out;
}

Dataset make_dataset(std::vector<AvdRecord> records) {
  Dataset ds;
  std::unordered_set<std::string> seen;
  for (auto& r : records) {
    if (!seen.insert(r.utt_id).second) throw Error(ErrorCode::DuplicateUttId, r.utt_id);
    ds.emotions_present.insert(r.emotion);
    ds.records.push_back(std::move(r));
  }
  return ds;
}

RecordFormat format_from_name(std::string_view name) {
  if (name == "csv") return RecordFormat::csv;
  if (name == "jsonl") return RecordFormat::jsonl;
  throw Error(ErrorCode::InvalidArgument, "unknown record format '" + std::string(name) + "'");
}

RecordFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? RecordFormat::jsonl : RecordFormat::csv;
}

}  // namespace emosphere
