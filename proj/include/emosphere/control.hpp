#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "emosphere/encoder.hpp"
#include "emosphere/sphere.hpp"

namespace emosphere {

enum class IntensityPreset { weak, medium, strong };
enum class Axis { arousal, valence, dominance };

inline constexpr double kWeakIntensity = 0.1;
inline constexpr double kMediumIntensity = 0.5;
inline constexpr double kStrongIntensity = 0.9;
inline constexpr double kMinStyleNorm = 1e-9;

double intensity_preset(IntensityPreset preset);
/// UnknownPreset for anything other than weak, medium or strong.
double intensity_preset(std::string_view name);

/// Signed basis vector for an axis, in (arousal, valence, dominance) order.
Vec3 axis_style(Axis axis, bool positive);

struct OctantStyle {
  int octant = 0;
};
struct AxisStyle {
  Axis axis = Axis::arousal;
  bool positive = true;
};

/// Manual conditioning request. A raw Vec3 style is normalized to unit length.
struct ControlSpec {
  std::string emotion;
  std::variant<OctantStyle, AxisStyle, Vec3> style;
  std::variant<double, IntensityPreset> intensity;
};

struct ControlResult {
  EmotionEmbedding embedding;
  Vec3 style{};
  double intensity = 0.0;
};

/// Resolves the style (ZeroStyleVector, OctantOutOfRange) and the intensity
/// (InvalidIntensity outside [0, 1]).
Vec3 resolve_style(const ControlSpec& spec);
double resolve_intensity(const ControlSpec& spec);

ControlResult build_control(const ControlSpec& spec, const EncoderWeights& w);

/// {"emotion": "angry",
///  "style": {"octant": 7} | {"vector": [a, v, d]} | {"axis": "A", "sign": "+"},
///  "intensity": 0.9 | "strong"}
ControlSpec parse_control(std::string_view json_text);

}  // namespace emosphere
