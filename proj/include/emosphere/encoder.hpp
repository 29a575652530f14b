#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emosphere/sphere.hpp"

namespace emosphere {

inline constexpr std::size_t kDefaultBranchWidth = 128;  // P; output width H = 2P = 256
inline constexpr double kLayerNormEps = 1e-5;
inline constexpr double kSeedInitRange = 0.1;
inline constexpr int kEncoderWeightsVersion = 1;

/// Parameters of the spherical emotion encoder. Matrices are row-major.
///
///   h_sty = style_proj (P x 3) * style + style_bias
///   h_cls = class_table row of the emotion (P wide)
///   h_int = intensity_proj (H x 1) * intensity + intensity_bias
///   h_emo = LN(softplus(concat(h_sty, h_cls))) + h_int
struct EncoderWeights {
  std::size_t branch_width = 0;  // P
  std::vector<double> style_proj;
  std::vector<double> style_bias;
  std::vector<double> class_table;
  std::vector<double> intensity_proj;
  std::vector<double> intensity_bias;
  std::vector<double> ln_gamma;
  std::vector<double> ln_beta;
  double ln_eps = kLayerNormEps;
  std::map<std::string, std::size_t> emotion_index;

  std::size_t output_width() const { return 2 * branch_width; }

  /// DimensionMismatch if any array disagrees with P, H = 2P or the emotion
  /// index, or if a value is not finite.
  void validate() const;

  bool operator==(const EncoderWeights&) const = default;
};

struct EmotionEmbedding {
  std::vector<double> values;
  bool operator==(const EmotionEmbedding&) const = default;
};

double softplus(double x);
std::vector<double> softplus(std::span<const double> x);

/// Population-variance layer norm. LengthMismatch on unequal lengths or
/// fewer than two elements.
std::vector<double> layer_norm(std::span<const double> v, std::span<const double> gamma, std::span<const double> beta,
                               double eps = kLayerNormEps);

EmotionEmbedding encode_emotion(const Vec3& style, double intensity, std::string_view emotion, const EncoderWeights& w);

/// Reproducible weights: projections, biases and the class table are drawn
/// uniform in [-0.1, 0.1] from SplitMix64(seed) in member order
/// (style_proj, style_bias, class_table, intensity_proj, intensity_bias);
/// layer norm starts at gamma = 1, beta = 0. Emotion rows follow the order given.
EncoderWeights seed_init_encoder(std::uint64_t seed, std::span<const std::string> emotions,
                                 std::size_t branch_width = kDefaultBranchWidth);

std::string serialize_encoder(const EncoderWeights& w);
EncoderWeights parse_encoder(std::string_view json_text);

}  // namespace emosphere
