#include "emosphere/control.hpp"

#include <cmath>

#include <json.hpp>

#include "emosphere/error.hpp"

namespace emosphere {

double intensity_preset(IntensityPreset preset) {
  switch (preset) {
    case IntensityPreset::weak: return kWeakIntensity;
    case IntensityPreset::medium: return kMediumIntensity;
    case IntensityPreset::strong: return kStrongIntensity;
  }
  return kMediumIntensity;
}

double intensity_preset(std::string_view name) {
  if (name == "weak") return kWeakIntensity;
  if (name == "medium") return kMediumIntensity;
  if (name == "strong") return kStrongIntensity;
  throw Error(ErrorCode::UnknownPreset, "'" + std::string(name) + "' (expected weak, medium or strong)");
}

Vec3 axis_style(Axis axis, bool positive) {
  Vec3 v{0.0, 0.0, 0.0};
  v[static_cast<std::size_t>(axis)] = positive ? 1.0 : -1.0;
  return v;
}

Vec3 resolve_style(const ControlSpec& spec) {
  if (const auto* o = std::get_if<OctantStyle>(&spec.style)) return octant_style_vector(o->octant);
  if (const auto* a = std::get_if<AxisStyle>(&spec.style)) return axis_style(a->axis, a->positive);
  const Vec3& v = std::get<Vec3>(spec.style);
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!std::isfinite(norm)) throw Error(ErrorCode::InvalidArgument, "style vector must be finite");
  if (norm < kMinStyleNorm) throw Error(ErrorCode::ZeroStyleVector, "style vector norm below 1e-9");
  return {v[0] / norm, v[1] / norm, v[2] / norm};
}

double resolve_intensity(const ControlSpec& spec) {
  if (const auto* p = std::get_if<IntensityPreset>(&spec.intensity)) return intensity_preset(*p);
  const double value = std::get<double>(spec.intensity);
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorCode::InvalidIntensity, "intensity " + std::to_string(value) + " outside [0, 1]");
  }
  return value;
}

ControlResult build_control(const ControlSpec& spec, const EncoderWeights& w) {
  ControlResult out;
  out.style = resolve_style(spec);
  out.intensity = resolve_intensity(spec);
  out.embedding = encode_emotion(out.style, out.intensity, spec.emotion, w);
  return out;
}

ControlSpec parse_control(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  auto bad = [](const std::string& why) { return Error(ErrorCode::MalformedFile, "control spec: " + why); };
  if (j.is_discarded() || !j.is_object()) throw bad("not a JSON object");
  ControlSpec spec;
  if (!j.contains("emotion") || !j["emotion"].is_string()) throw bad("'emotion' must be a string");
  spec.emotion = j["emotion"].get<std::string>();

  if (!j.contains("style") || !j["style"].is_object()) throw bad("'style' must be an object");
  const auto& style = j["style"];
  if (style.contains("octant")) {
    if (!style["octant"].is_number_integer()) throw bad("'octant' must be an integer");
    const auto octant = style["octant"].get<long long>();
    if (octant < 0 || octant >= kOctantCount) {
      throw Error(ErrorCode::OctantOutOfRange, "octant " + std::to_string(octant) + " not in 0..7");
    }
    spec.style = OctantStyle{static_cast<int>(octant)};
  } else if (style.contains("vector")) {
    const auto& v = style["vector"];
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      throw bad("'vector' must be three numbers");
    }
    spec.style = Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  } else if (style.contains("axis")) {
    if (!style["axis"].is_string() || !style.contains("sign") || !style["sign"].is_string()) {
      throw bad("axis style needs string 'axis' and 'sign'");
    }
    const auto axis = style["axis"].get<std::string>();
    const auto sign = style["sign"].get<std::string>();
    AxisStyle a;
    if (axis == "A") a.axis = Axis::arousal;
    else if (axis == "V") a.axis = Axis::valence;
    else if (axis == "D") a.axis = Axis::dominance;
    else throw bad("'axis' must be A, V or D");
    if (sign == "+") a.positive = true;
    else if (sign == "-") a.positive = false;
    else throw bad("'sign' must be + or -");
    spec.style = a;
  } else {
    throw bad("'style' needs one of octant, vector or axis");
  }

  if (!j.contains("intensity")) throw bad("missing 'intensity'");
  const auto& intensity = j["intensity"];
  if (intensity.is_string()) {
    const auto name = intensity.get<std::string>();
    intensity_preset(name);  // UnknownPreset
    spec.intensity = name == "weak" ? IntensityPreset::weak
                     : name == "medium" ? IntensityPreset::medium
                                        : IntensityPreset::strong;
  } else if (intensity.is_number()) {
    spec.intensity = intensity.get<double>();
  } else {
    throw bad("'intensity' must be a number or a preset name");
  }
  return spec;
}

}  // namespace emosphere
