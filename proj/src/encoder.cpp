#include "emosphere/encoder.hpp"

#include <cmath>

#include <json.hpp>

#include "emosphere/error.hpp"
#include "emosphere/prng.hpp"

namespace emosphere {

namespace {

void require_size(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " has " + std::to_string(v.size()) + " entries, expected " + std::to_string(n));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has a non-finite entry");
  }
}

}  // namespace

void EncoderWeights::validate() const {
  const std::size_t p = branch_width;
  const std::size_t h = output_width();
  if (p == 0) throw Error(ErrorCode::DimensionMismatch, "branch width P must be positive");
  if (emotion_index.empty()) throw Error(ErrorCode::DimensionMismatch, "emotion_index is empty");
  require_size(style_proj, p * 3, "style_proj");
  require_size(style_bias, p, "style_bias");
  require_size(class_table, emotion_index.size() * p, "class_table");
  require_size(intensity_proj, h, "intensity_proj");
  require_size(intensity_bias, h, "intensity_bias");
  require_size(ln_gamma, h, "ln_gamma");
  require_size(ln_beta, h, "ln_beta");
  std::vector<bool> used(emotion_index.size(), false);
  for (const auto& [label, row] : emotion_index) {
    if (row >= used.size() || used[row]) {
      throw Error(ErrorCode::DimensionMismatch, "emotion_index rows must be a permutation of 0..n-1");
    }
    used[row] = true;
  }
  if (!(ln_eps >= 0.0) || !std::isfinite(ln_eps)) throw Error(ErrorCode::DimensionMismatch, "ln_eps must be >= 0");
}

double softplus(double x) {
  if (x > 20.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

std::vector<double> softplus(std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = softplus(x[i]);
  return out;
}

std::vector<double> layer_norm(std::span<const double> v, std::span<const double> gamma, std::span<const double> beta,
                               double eps) {
  if (v.size() != gamma.size() || v.size() != beta.size()) {
    throw Error(ErrorCode::LengthMismatch, "layer_norm input, gamma and beta lengths differ");
  }
  if (v.size() < 2) throw Error(ErrorCode::LengthMismatch, "layer_norm needs at least two elements");
  const auto n = static_cast<double>(v.size());
  // Shift by the first element so a constant vector centers to exact zeros.
  const double shift = v[0];
  double sum = 0.0;
  for (double x : v) sum += x - shift;
  const double mean_shifted = sum / n;
  std::vector<double> centered(v.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    centered[i] = (v[i] - shift) - mean_shifted;
    sq += centered[i] * centered[i];
  }
  const double inv_std = 1.0 / std::sqrt(sq / n + eps);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = centered[i] * inv_std * gamma[i] + beta[i];
  return out;
}

EmotionEmbedding encode_emotion(const Vec3& style, double intensity, std::string_view emotion, const EncoderWeights& w) {
  w.validate();
  const auto it = w.emotion_index.find(std::string(emotion));
  if (it == w.emotion_index.end()) throw Error(ErrorCode::UnknownEmotion, std::string(emotion));
  for (double s : style) {
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "style vector must be finite");
  }
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw Error(ErrorCode::InvalidIntensity, "intensity must lie in [0, 1]");
  }

  const std::size_t p = w.branch_width;
  const std::size_t h = w.output_width();
  std::vector<double> fused(h);
  for (std::size_t i = 0; i < p; ++i) {
    const double* row = &w.style_proj[i * 3];
    fused[i] = row[0] * style[0] + row[1] * style[1] + row[2] * style[2] + w.style_bias[i];
  }
  const double* cls = &w.class_table[it->second * p];
  for (std::size_t i = 0; i < p; ++i) fused[p + i] = cls[i];

  const auto z = layer_norm(softplus(fused), w.ln_gamma, w.ln_beta, w.ln_eps);

  EmotionEmbedding out;
  out.values.resize(h);
  for (std::size_t i = 0; i < h; ++i) out.values[i] = z[i] + (w.intensity_proj[i] * intensity + w.intensity_bias[i]);
  return out;
}

EncoderWeights seed_init_encoder(std::uint64_t seed, std::span<const std::string> emotions, std::size_t branch_width) {
  if (emotions.empty()) throw Error(ErrorCode::InvalidArgument, "at least one emotion label is required");
  if (branch_width == 0) throw Error(ErrorCode::InvalidArgument, "branch width must be positive");
  SplitMix64 rng(seed);
  auto draw = [&](std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(-kSeedInitRange, kSeedInitRange);
    return v;
  };
  EncoderWeights w;
  w.branch_width = branch_width;
  for (std::size_t i = 0; i < emotions.size(); ++i) {
    if (!w.emotion_index.emplace(emotions[i], i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate emotion label '" + emotions[i] + "'");
    }
  }
  const std::size_t h = w.output_width();
  w.style_proj = draw(branch_width * 3);
  w.style_bias = draw(branch_width);
  w.class_table = draw(emotions.size() * branch_width);
  w.intensity_proj = draw(h);
  w.intensity_bias = draw(h);
  w.ln_gamma.assign(h, 1.0);
  w.ln_beta.assign(h, 0.0);
  return w;
}

std::string serialize_encoder(const EncoderWeights& w) {
  nlohmann::ordered_json j;
  j["version"] = kEncoderWeightsVersion;
  j["dims"] = {{"P", w.branch_width}, {"H", w.output_width()}, {"emotions", w.emotion_index.size()}};
  nlohmann::ordered_json index = nlohmann::ordered_json::object();
  for (const auto& [label, row] : w.emotion_index) index[label] = row;
  j["emotion_index"] = std::move(index);
  j["style_proj"] = w.style_proj;
  j["style_bias"] = w.style_bias;
  j["class_table"] = w.class_table;
  j["intensity_proj"] = w.intensity_proj;
  j["intensity_bias"] = w.intensity_bias;
  j["ln_gamma"] = w.ln_gamma;
  j["ln_beta"] = w.ln_beta;
  j["ln_eps"] = w.ln_eps;
  return j.dump() + '\n';
}

EncoderWeights parse_encoder(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedFile, "encoder weights are not a JSON object");
  try {
    if (j.value("version", 0) != kEncoderWeightsVersion) {
      throw Error(ErrorCode::UnsupportedVersion, "encoder weights version must be 1");
    }
    EncoderWeights w;
    const auto& dims = j.at("dims");
    w.branch_width = dims.at("P").get<std::size_t>();
    if (dims.contains("H") && dims["H"].get<std::size_t>() != 2 * w.branch_width) {
      throw Error(ErrorCode::DimensionMismatch, "H must equal 2P");
    }
    for (const auto& [label, row] : j.at("emotion_index").items()) w.emotion_index.emplace(label, row.get<std::size_t>());
    w.style_proj = j.at("style_proj").get<std::vector<double>>();
    w.style_bias = j.at("style_bias").get<std::vector<double>>();
    w.class_table = j.at("class_table").get<std::vector<double>>();
    w.intensity_proj = j.at("intensity_proj").get<std::vector<double>>();
    w.intensity_bias = j.at("intensity_bias").get<std::vector<double>>();
    w.ln_gamma = j.at("ln_gamma").get<std::vector<double>>();
    w.ln_beta = j.at("ln_beta").get<std::vector<double>>();
    w.ln_eps = j.value("ln_eps", kLayerNormEps);
    w.validate();
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedFile, std::string("encoder weights: ") + e.what());
  }
}

}  // namespace emosphere
