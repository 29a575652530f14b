#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emosphere/avd.hpp"

namespace emosphere {

// (arousal, valence, dominance) order throughout.
using Vec3 = std::array<double, 3>;

inline constexpr int kOctantCount = 8;
inline constexpr double kDegenerateRadiusEps = 1e-8;
inline constexpr double kTukeyK = 1.5;
inline constexpr std::string_view kQuantileMethod = "linear-interpolation/type-7";
inline constexpr int kSphereModelVersion = 1;
inline constexpr std::string_view kGlobalFenceKey = "*";

/// Mean AVD coordinate of the neutral utterances; origin of the emotion sphere.
struct NeutralCenter {
  Vec3 m{};
  bool operator==(const NeutralCenter&) const = default;
};

/// An AVD coordinate expressed relative to the neutral center.
struct CenteredPoint {
  double da = 0.0;
  double dv = 0.0;
  double dd = 0.0;
  bool operator==(const CenteredPoint&) const = default;
};

/// Radius r >= 0, polar angle theta in [0, pi] measured from +dominance,
/// azimuth phi in (-pi, pi] measured in the arousal/valence plane from
/// +arousal toward +valence. r_norm and octant are filled in by transform().
struct SphericalPoint {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  std::optional<double> r_norm;
  std::optional<int> octant;
  bool operator==(const SphericalPoint&) const = default;
};

/// Min/max used to scale radii into [0, 1], from Tukey's interquartile fences.
struct RadiusFences {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const RadiusFences&) const = default;
};

enum class FenceScope { per_emotion, global };

struct SphereModel {
  NeutralCenter center;
  std::map<std::string, RadiusFences> fences;
  FenceScope fence_scope = FenceScope::per_emotion;
  std::string quantile_method{kQuantileMethod};
  int version = kSphereModelVersion;

  bool operator==(const SphereModel&) const = default;

  // Fences that apply to a record of the given emotion; UnknownEmotion if none.
  const RadiusFences& fences_for(std::string_view emotion) const;
};

NeutralCenter fit_neutral_center(const Dataset& dataset);

CenteredPoint center(const Vec3& e, const NeutralCenter& m);
Vec3 coordinates(const AvdRecord& record);

/// Throws DegenerateRadius when r < eps: the angles are undefined there.
SphericalPoint to_spherical(const CenteredPoint& p, double eps = kDegenerateRadiusEps);
CenteredPoint from_spherical(const SphericalPoint& s);

/// Type-7 quantile (linear interpolation between order statistics) of
/// already-sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

/// lo = max(0, Q1 - 1.5 IQR), hi = Q3 + 1.5 IQR. Needs at least 4 radii.
RadiusFences fit_radius_fences(std::span<const double> radii);

/// clip((r - lo) / (hi - lo), 0, 1)
double normalize_intensity(double r, const RadiusFences& f);

/// bit0 = (da >= 0), bit1 = (dv >= 0), bit2 = (dd >= 0). Zero counts as positive.
int quantize_octant(const CenteredPoint& p);

/// Unit centroid (+-1, +-1, +-1)/sqrt(3) of an octant. OctantOutOfRange outside 0..7.
Vec3 octant_style_vector(int octant);

SphereModel fit(const Dataset& dataset, FenceScope scope);

SphericalPoint transform(const AvdRecord& record, const SphereModel& model);
std::vector<SphericalPoint> transform(std::span<const AvdRecord> records, const SphereModel& model);

std::string_view fence_scope_name(FenceScope scope);
FenceScope fence_scope_from_name(std::string_view name);

std::string serialize_model(const SphereModel& model);
SphereModel parse_model(std::string_view json_text);

}  // namespace emosphere
