#include "emosphere/adversarial_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include <json.hpp>

#include "emosphere/error.hpp"
#include "emosphere/io.hpp"

namespace emosphere {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::uint32_t load_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

Error malformed(const std::string& what) { return Error(ErrorCode::MalformedFile, what); }

std::vector<double> real_array(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array()) throw malformed(std::string("'") + key + "' must be an array");
  std::vector<double> v;
  v.reserve(it->size());
  for (const auto& x : *it) {
    if (!x.is_number()) throw malformed(std::string("'") + key + "' must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

std::size_t count(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_unsigned()) throw malformed(std::string("'") + key + "' must be a count");
  return it->get<std::size_t>();
}

std::pair<std::size_t, std::size_t> pair_of(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 2 || !(*it)[0].is_number_unsigned() ||
      !(*it)[1].is_number_unsigned()) {
    throw malformed(std::string("'") + key + "' must be a pair of counts");
  }
  return {(*it)[0].get<std::size_t>(), (*it)[1].get<std::size_t>()};
}

}  // namespace

Mel decode_melf(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != kMelfMagic) throw malformed("not a MELF file (bad magic or header)");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t bins = load_u32(p + 4);
  const std::uint64_t frames = load_u32(p + 8);
  if (bins == 0 || frames == 0) throw malformed("MELF dimensions must be positive");
  const std::uint64_t expected = 12 + 4 * bins * frames;
  if (bytes.size() != expected) {
    throw malformed("MELF header declares " + std::to_string(bins) + "x" + std::to_string(frames) + " (" +
                    std::to_string(expected) + " bytes) but file has " + std::to_string(bytes.size()));
  }
  Mel mel(static_cast<std::size_t>(bins), static_cast<std::size_t>(frames));
  for (std::size_t i = 0; i < mel.data.size(); ++i) {
    const float v = std::bit_cast<float>(load_u32(p + 12 + 4 * i));
    if (!std::isfinite(v)) throw malformed("MELF value " + std::to_string(i) + " is not finite");
    mel.data[i] = static_cast<double>(v);
  }
  return mel;
}

std::string encode_melf(const Mel& mel) {
  if (mel.bins == 0 || mel.frames == 0 || mel.data.size() != mel.bins * mel.frames) {
    throw Error(ErrorCode::InvalidArgument, "mel has inconsistent dimensions");
  }
  if (mel.bins > UINT32_MAX || mel.frames > UINT32_MAX) throw Error(ErrorCode::InvalidArgument, "mel too large for MELF");
  std::string out(kMelfMagic);
  store_u32(out, static_cast<std::uint32_t>(mel.bins));
  store_u32(out, static_cast<std::uint32_t>(mel.frames));
  out.reserve(12 + 4 * mel.data.size());
  for (double v : mel.data) store_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

Mel read_melf(const std::filesystem::path& path) {
  try {
    return decode_melf(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedFile) throw Error(e.code(), path.string() + ": " + e.detail());
    throw;
  }
}

void write_melf(const std::filesystem::path& path, const Mel& mel) { write_file(path, encode_melf(mel)); }

std::vector<std::filesystem::path> list_melf(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::MissingFile, dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".melf") files.push_back(entry.path());
  }
  if (ec) throw Error(ErrorCode::IoFailure, "cannot list " + dir.string());
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

std::string serialize_discriminator(const DiscriminatorWeights& w) {
  ordered_json j;
  j["version"] = kDiscWeightsVersion;
  ordered_json stacks = ordered_json::array();
  for (const auto& s : w.stacks) {
    ordered_json sj;
    sj["window"] = s.window;
    sj["kind"] = cond_kind_name(s.kind);
    sj["input"] = {s.in_channels, s.in_height, s.in_width};
    sj["leaky_slope"] = s.leaky_slope;
    ordered_json layers = ordered_json::array();
    for (const auto& layer : s.conv) {
      ordered_json lj;
      lj["out"] = layer.out_channels;
      lj["in"] = layer.in_channels;
      lj["kernel"] = {layer.kernel_h, layer.kernel_w};
      lj["stride"] = {layer.stride_h, layer.stride_w};
      lj["weight"] = layer.weight;
      lj["bias"] = layer.bias;
      layers.push_back(std::move(lj));
    }
    sj["conv"] = std::move(layers);
    sj["fc"] = {{"weight", s.fc_weight}, {"bias", s.fc_bias}};
    stacks.push_back(std::move(sj));
  }
  j["stacks"] = std::move(stacks);
  return j.dump() + '\n';
}

DiscriminatorWeights parse_discriminator(std::string_view json_text) {
  const auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw malformed("discriminator weights are not a JSON object");
  try {
    if (j.value("version", 0) != kDiscWeightsVersion) {
      throw Error(ErrorCode::UnsupportedVersion, "discriminator weights version must be 1");
    }
    const auto& stacks = j.at("stacks");
    if (!stacks.is_array() || stacks.empty()) throw malformed("'stacks' must be a nonempty array");
    DiscriminatorWeights w;
    for (const auto& sj : stacks) {
      StackWeights s;
      s.window = count(sj, "window");
      if (!sj.at("kind").is_string()) throw malformed("stack 'kind' must be a string");
      try {
        s.kind = cond_kind_from_name(sj["kind"].get<std::string>());
      } catch (const Error& e) {
        throw malformed(e.detail());
      }
      const auto& input = sj.at("input");
      if (!input.is_array() || input.size() != 3) throw malformed("stack 'input' must be [channels, height, width]");
      s.in_channels = input[0].get<std::size_t>();
      s.in_height = input[1].get<std::size_t>();
      s.in_width = input[2].get<std::size_t>();
      s.leaky_slope = sj.value("leaky_slope", kDefaultLeakySlope);
      for (const auto& lj : sj.at("conv")) {
        ConvLayer layer;
        layer.out_channels = count(lj, "out");
        layer.in_channels = count(lj, "in");
        std::tie(layer.kernel_h, layer.kernel_w) = pair_of(lj, "kernel");
        std::tie(layer.stride_h, layer.stride_w) = pair_of(lj, "stride");
        layer.weight = real_array(lj, "weight");
        layer.bias = real_array(lj, "bias");
        s.conv.push_back(std::move(layer));
      }
      const auto& fc = sj.at("fc");
      s.fc_weight = real_array(fc, "weight");
      if (!fc.at("bias").is_number()) throw malformed("fc 'bias' must be a number");
      s.fc_bias = fc["bias"].get<double>();
      validate_stack(s);
      for (const auto& other : w.stacks) {
        if (other.window == s.window && other.kind == s.kind) throw malformed("duplicate stack for one (window, kind)");
      }
      w.stacks.push_back(std::move(s));
    }
    return w;
  } catch (const json::exception& e) {
    throw malformed(std::string("discriminator weights: ") + e.what());
  }
}

std::string serialize_conditions(const std::vector<SampleConditions>& conds) {
  ordered_json j;
  j["dim"] = conds.empty() ? 0 : conds.front().speaker.values.size();
  ordered_json samples = ordered_json::array();
  for (const auto& c : conds) samples.push_back({{"speaker", c.speaker.values}, {"emotion", c.emotion.values}});
  j["samples"] = std::move(samples);
  return j.dump() + '\n';
}

std::vector<SampleConditions> parse_conditions(std::string_view json_text) {
  const auto j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw malformed("conditions file is not a JSON object");
  try {
    const std::size_t dim = count(j, "dim");
    if (dim == 0) throw malformed("condition 'dim' must be positive");
    const auto& samples = j.at("samples");
    if (!samples.is_array()) throw malformed("'samples' must be an array");
    std::vector<SampleConditions> out;
    for (const auto& sj : samples) {
      if (!sj.is_object()) throw malformed("condition sample must be an object");
      SampleConditions c{{CondKind::speaker, real_array(sj, "speaker")}, {CondKind::emotion, real_array(sj, "emotion")}};
      for (const auto* e : {&c.speaker, &c.emotion}) {
        if (e->values.size() != dim) throw Error(ErrorCode::DimensionMismatch, "condition vector length differs from 'dim'");
        if (!std::all_of(e->values.begin(), e->values.end(), [](double x) { return std::isfinite(x); })) {
          throw malformed("condition values must be finite");
        }
      }
      out.push_back(std::move(c));
    }
    return out;
  } catch (const json::exception& e) {
    throw malformed(std::string("conditions: ") + e.what());
  }
}

}  // namespace emosphere
