#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emosphere/adversarial.hpp"

namespace emosphere {

// MELF: "MELF", u32 LE bins, u32 LE frames, then bins*frames f32 LE values,
// feature-major.
inline constexpr std::string_view kMelfMagic = "MELF";
inline constexpr int kDiscWeightsVersion = 1;

/// MalformedFile on a bad magic, a size that disagrees with the header,
/// zero dimensions or non-finite values.
Mel decode_melf(std::string_view bytes);
std::string encode_melf(const Mel& mel);

Mel read_melf(const std::filesystem::path& path);
void write_melf(const std::filesystem::path& path, const Mel& mel);

/// Regular files ending in .melf, sorted by file name.
std::vector<std::filesystem::path> list_melf(const std::filesystem::path& dir);

std::string serialize_discriminator(const DiscriminatorWeights& w);
DiscriminatorWeights parse_discriminator(std::string_view json_text);

/// {"dim": C, "samples": [{"speaker": [C reals], "emotion": [C reals]}, ...]}
std::string serialize_conditions(const std::vector<SampleConditions>& conds);
std::vector<SampleConditions> parse_conditions(std::string_view json_text);

}  // namespace emosphere
