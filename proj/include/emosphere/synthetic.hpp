#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emosphere/adversarial.hpp"
#include "emosphere/avd.hpp"
#include "emosphere/sphere.hpp"

namespace emosphere {

/// A synthetic emotion cluster: points are drawn at
/// neutral + s * offset + noise, s uniform in [scale_lo, scale_hi].
/// expected_octants is empty for clusters with no preferred direction.
struct SyntheticEmotion {
  std::string label;
  Vec3 offset{};
  std::vector<int> expected_octants;
};

/// neutral plus angry (+A -V +D), happy (+A +V +D), sad (-A -V -D) and
/// surprise (+A +V -D).
std::vector<SyntheticEmotion> default_synthetic_emotions();

struct SyntheticConfig {
  std::uint64_t seed = 0;
  std::size_t per_emotion = 200;
  std::size_t speakers = 10;
  Vec3 neutral{0.5, 0.5, 0.5};
  double neutral_noise = 0.01;
  double cluster_noise = 0.03;
  double scale_lo = 0.3;
  double scale_hi = 1.0;
};

/// Records are interleaved across emotions; utt ids are "<label>_<index>".
Dataset synthesize_dataset(const SyntheticConfig& config,
                           const std::vector<SyntheticEmotion>& emotions = default_synthetic_emotions());

struct GanFixture {
  std::vector<Mel> real;
  std::vector<Mel> fake;
  std::vector<SampleConditions> conds;
};

/// Random log-mel-like values in [-4, 0] for real clips; generated clips are
/// the real ones plus uniform noise in [-0.5, 0.5]. Conditions uniform in [-1, 1].
GanFixture synthesize_gan_fixture(std::uint64_t seed, std::size_t count, std::size_t bins = kDefaultMelBins,
                                  std::size_t frames = 128, std::size_t cond_width = kDefaultConditionWidth);

}  // namespace emosphere
