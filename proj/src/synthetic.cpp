#include "emosphere/synthetic.hpp"

#include <cstdio>

#include "emosphere/error.hpp"
#include "emosphere/prng.hpp"

namespace emosphere {

std::vector<SyntheticEmotion> default_synthetic_emotions() {
  return {
      {"neutral", {0.0, 0.0, 0.0}, {}},
      {"angry", {0.4, -0.4, 0.4}, {5}},
      {"happy", {0.35, 0.4, 0.2}, {7}},
      {"sad", {-0.3, -0.3, -0.25}, {0}},
      {"surprise", {0.4, 0.3, -0.2}, {3}},
  };
}

Dataset synthesize_dataset(const SyntheticConfig& config, const std::vector<SyntheticEmotion>& emotions) {
  if (config.speakers == 0) throw Error(ErrorCode::InvalidArgument, "speaker count must be positive");
  SplitMix64 rng(config.seed);
  std::vector<AvdRecord> records;
  records.reserve(config.per_emotion * emotions.size());
  for (std::size_t i = 0; i < config.per_emotion; ++i) {
    for (const auto& emo : emotions) {
      const bool is_neutral = emo.label == kNeutralLabel;
      const double noise = is_neutral ? config.neutral_noise : config.cluster_noise;
      const double scale = is_neutral ? 0.0 : rng.uniform(config.scale_lo, config.scale_hi);
      Vec3 p{};
      for (std::size_t k = 0; k < 3; ++k) p[k] = config.neutral[k] + scale * emo.offset[k] + rng.uniform(-noise, noise);
      char id[32];
      std::snprintf(id, sizeof id, "_%05zu", i);
      records.push_back({emo.label + id, "spk" + std::to_string(i % config.speakers), emo.label, p[0], p[1], p[2]});
    }
  }
  return make_dataset(std::move(records));
}

GanFixture synthesize_gan_fixture(std::uint64_t seed, std::size_t count, std::size_t bins, std::size_t frames,
                                  std::size_t cond_width) {
  if (count == 0 || bins == 0 || frames == 0 || cond_width == 0) {
    throw Error(ErrorCode::InvalidArgument, "fixture dimensions must be positive");
  }
  SplitMix64 rng(seed);
  GanFixture fx;
  for (std::size_t b = 0; b < count; ++b) {
    Mel real(bins, frames);
    for (auto& v : real.data) v = rng.uniform(-4.0, 0.0);
    Mel fake = real;
    for (auto& v : fake.data) v += rng.uniform(-0.5, 0.5);
    SampleConditions c{{CondKind::speaker, std::vector<double>(cond_width)},
                       {CondKind::emotion, std::vector<double>(cond_width)}};
    for (auto& v : c.speaker.values) v = rng.uniform(-1.0, 1.0);
    for (auto& v : c.emotion.values) v = rng.uniform(-1.0, 1.0);
    fx.real.push_back(std::move(real));
    fx.fake.push_back(std::move(fake));
    fx.conds.push_back(std::move(c));
  }
  return fx;
}

}  // namespace emosphere
