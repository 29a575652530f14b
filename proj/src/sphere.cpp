#include "emosphere/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "emosphere/error.hpp"

namespace emosphere {

namespace {

double radius_of(const CenteredPoint& p) { return std::sqrt(p.da * p.da + p.dv * p.dv + p.dd * p.dd); }

// Summing sorted values makes the mean independent of record order, bit for bit.
double order_free_mean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

const RadiusFences& SphereModel::fences_for(std::string_view emotion) const {
  const auto key = fence_scope == FenceScope::global ? std::string(kGlobalFenceKey) : std::string(emotion);
  const auto it = fences.find(key);
  if (it == fences.end()) throw Error(ErrorCode::UnknownEmotion, std::string(emotion));
  return it->second;
}

NeutralCenter fit_neutral_center(const Dataset& dataset) {
  std::array<std::vector<double>, 3> cols;
  for (const auto& r : dataset.records) {
    if (r.emotion != kNeutralLabel) continue;
    cols[0].push_back(r.arousal);
    cols[1].push_back(r.valence);
    cols[2].push_back(r.dominance);
  }
  if (cols[0].empty()) throw Error(ErrorCode::NoNeutralRecords, "dataset has no records labeled 'neutral'");
  NeutralCenter c;
  for (std::size_t i = 0; i < 3; ++i) c.m[i] = order_free_mean(std::move(cols[i]));
  return c;
}

Vec3 coordinates(const AvdRecord& record) { return {record.arousal, record.valence, record.dominance}; }

CenteredPoint center(const Vec3& e, const NeutralCenter& m) {
  return {e[0] - m.m[0], e[1] - m.m[1], e[2] - m.m[2]};
}

SphericalPoint to_spherical(const CenteredPoint& p, double eps) {
  const double r = radius_of(p);
  if (!(r >= eps)) throw Error(ErrorCode::DegenerateRadius, "radius " + std::to_string(r) + " below " + std::to_string(eps));
  SphericalPoint s;
  s.r = r;
  // Same angle as acos(dd / r), without acos's loss of precision near the poles.
  s.theta = std::atan2(std::sqrt(p.da * p.da + p.dv * p.dv), p.dd);
  double phi = std::atan2(p.dv, p.da) + 0.0;  // + 0.0 folds -0 into +0
  if (phi <= -std::numbers::pi) phi = std::numbers::pi;
  s.phi = phi;
  return s;
}

CenteredPoint from_spherical(const SphericalPoint& s) {
  const double sin_t = std::sin(s.theta);
  return {s.r * sin_t * std::cos(s.phi), s.r * sin_t * std::sin(s.phi), s.r * std::cos(s.theta)};
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::TooFewSamples, "quantile of empty data");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

RadiusFences fit_radius_fences(std::span<const double> radii) {
  if (radii.size() < 4) {
    throw Error(ErrorCode::TooFewSamples, "need at least 4 radii, got " + std::to_string(radii.size()));
  }
  std::vector<double> sorted(radii.begin(), radii.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = quantile_sorted(sorted, 0.25);
  const double q3 = quantile_sorted(sorted, 0.75);
  const double iqr = q3 - q1;
  RadiusFences f{std::max(0.0, q1 - kTukeyK * iqr), q3 + kTukeyK * iqr};
  if (!(f.hi > f.lo)) {
    throw Error(ErrorCode::DegenerateScale, "interquartile range is zero (Q1=" + std::to_string(q1) +
                                                ", Q3=" + std::to_string(q3) + ")");
  }
  return f;
}

double normalize_intensity(double r, const RadiusFences& f) {
  return std::clamp((r - f.lo) / (f.hi - f.lo), 0.0, 1.0);
}

int quantize_octant(const CenteredPoint& p) {
  const int bit0 = p.da >= 0.0 ? 1 : 0;
  const int bit1 = p.dv >= 0.0 ? 1 : 0;
  const int bit2 = p.dd >= 0.0 ? 1 : 0;
  return 4 * bit2 + 2 * bit1 + bit0;
}

Vec3 octant_style_vector(int octant) {
  if (octant < 0 || octant >= kOctantCount) {
    throw Error(ErrorCode::OctantOutOfRange, "octant " + std::to_string(octant) + " not in 0..7");
  }
  const double s = 1.0 / std::sqrt(3.0);
  return {(octant & 1) ? s : -s, (octant & 2) ? s : -s, (octant & 4) ? s : -s};
}

SphereModel fit(const Dataset& dataset, FenceScope scope) {
  SphereModel model;
  model.fence_scope = scope;
  model.center = fit_neutral_center(dataset);

  std::map<std::string, std::vector<double>> groups;
  for (const auto& rec : dataset.records) {
    const auto key = scope == FenceScope::global ? std::string(kGlobalFenceKey) : rec.emotion;
    groups[key].push_back(radius_of(center(coordinates(rec), model.center)));
  }
  for (const auto& [label, radii] : groups) {
    try {
      model.fences.emplace(label, fit_radius_fences(radii));
    } catch (const Error& e) {
      throw Error(e.code(), "group '" + label + "': " + e.detail());
    }
  }
  return model;
}

SphericalPoint transform(const AvdRecord& record, const SphereModel& model) {
  const auto& fences = model.fences_for(record.emotion);
  const auto p = center(coordinates(record), model.center);
  SphericalPoint s;
  try {
    s = to_spherical(p);
  } catch (const Error& e) {
    throw Error(e.code(), record.utt_id + " sits on the neutral center (" + e.detail() + ")");
  }
  s.r_norm = normalize_intensity(s.r, fences);
  s.octant = quantize_octant(p);
  return s;
}

std::vector<SphericalPoint> transform(std::span<const AvdRecord> records, const SphereModel& model) {
  std::vector<SphericalPoint> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(transform(r, model));
  return out;
}

std::string_view fence_scope_name(FenceScope scope) {
  return scope == FenceScope::global ? "global" : "per_emotion";
}

FenceScope fence_scope_from_name(std::string_view name) {
  if (name == "per_emotion") return FenceScope::per_emotion;
  if (name == "global") return FenceScope::global;
  throw Error(ErrorCode::InvalidArgument, "unknown fence scope '" + std::string(name) + "'");
}

std::string serialize_model(const SphereModel& model) {
  nlohmann::ordered_json j;
  j["version"] = model.version;
  j["center"] = {model.center.m[0], model.center.m[1], model.center.m[2]};
  j["fence_scope"] = fence_scope_name(model.fence_scope);
  j["quantile_method"] = model.quantile_method;
  nlohmann::ordered_json fences = nlohmann::ordered_json::object();
  for (const auto& [label, f] : model.fences) fences[label] = {{"lo", f.lo}, {"hi", f.hi}};
  j["fences"] = std::move(fences);
  return j.dump(2) + '\n';
}

SphereModel parse_model(std::string_view json_text) {
  const auto j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::MalformedFile, "sphere model is not a JSON object");
  auto bad = [](const std::string& why) { return Error(ErrorCode::MalformedFile, "sphere model: " + why); };
  try {
    SphereModel m;
    if (!j.contains("version") || !j["version"].is_number_integer()) throw bad("missing integer 'version'");
    m.version = j["version"].get<int>();
    if (m.version != kSphereModelVersion) {
      throw Error(ErrorCode::UnsupportedVersion, "sphere model version " + std::to_string(m.version));
    }
    const auto& c = j.at("center");
    if (!c.is_array() || c.size() != 3) throw bad("'center' must be a 3-element array");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!c[i].is_number()) throw bad("'center' entries must be numbers");
      m.center.m[i] = c[i].get<double>();
    }
    if (!j.at("fence_scope").is_string()) throw bad("'fence_scope' must be a string");
    try {
      m.fence_scope = fence_scope_from_name(j["fence_scope"].get<std::string>());
    } catch (const Error& e) {
      throw bad(e.detail());
    }
    if (!j.at("quantile_method").is_string() || j["quantile_method"].get<std::string>() != kQuantileMethod) {
      throw bad("unsupported quantile_method");
    }
    const auto& fences = j.at("fences");
    if (!fences.is_object() || fences.empty()) throw bad("'fences' must be a nonempty object");
    for (const auto& [label, f] : fences.items()) {
      if (!f.is_object() || !f.contains("lo") || !f.contains("hi") || !f["lo"].is_number() || !f["hi"].is_number()) {
        throw bad("fence '" + label + "' needs numeric lo and hi");
      }
      RadiusFences rf{f["lo"].get<double>(), f["hi"].get<double>()};
      if (!(rf.lo >= 0.0) || !(rf.hi > rf.lo) || !std::isfinite(rf.hi)) throw bad("fence '" + label + "' is invalid");
      m.fences.emplace(label, rf);
    }
    if (m.fence_scope == FenceScope::global && (m.fences.size() != 1 || !m.fences.contains(std::string(kGlobalFenceKey)))) {
      throw bad("global scope requires exactly one fence keyed '*'");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw bad(e.what());
  }
}

}  // namespace emosphere
