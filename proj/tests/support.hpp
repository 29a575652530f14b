#pragma once

// Test-only helpers: a property-test input generator, scratch directories and
// reference implementations written independently of the library code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "emosphere/adversarial.hpp"
#include "emosphere/encoder.hpp"

namespace testing_support {

// Input generator for property tests. Same SplitMix64 recurrence the
// library uses, kept separate so library changes cannot hide in both.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}
  std::uint64_t u64() {
    std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(u64() >> 11) / 9007199254740992.0; }
  double real(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

 private:
  std::uint64_t s_;
};

// Fresh scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("emosphere_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Geometry oracles

struct ScalarSpherical {
  double r, theta, phi;
};

// Textbook formulas: polar angle via arccos, azimuth via atan2.
inline ScalarSpherical scalar_spherical(double da, double dv, double dd) {
  const double r = std::sqrt(da * da + dv * dv + dd * dd);
  return {r, std::acos(dd / r), std::atan2(dv, da)};
}

// Octant from angles alone: upper hemisphere and azimuth quadrant.
inline int angle_octant(double theta, double phi) {
  const bool d_pos = theta <= std::numbers::pi / 2;
  const bool a_pos = std::cos(phi) >= 0.0;
  const bool v_pos = std::sin(phi) >= 0.0;
  return (d_pos ? 4 : 0) + (v_pos ? 2 : 0) + (a_pos ? 1 : 0);
}

// Type-7 quantile: sort, then interpolate between the neighbors of h = (n-1)p.
inline double brute_quantile(std::vector<double> xs, double p) {
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = static_cast<std::size_t>(std::ceil(h));
  return xs[lo] + (h - std::floor(h)) * (xs[hi] - xs[lo]);
}

// Welford running mean.
inline double streaming_mean(const std::vector<double>& xs) {
  double mean = 0.0;
  double n = 0.0;
  for (double x : xs) {
    n += 1.0;
    mean += (x - mean) / n;
  }
  return mean;
}

// ---------------------------------------------------------------------------
// Discriminator oracle: direct nested-loop convolution with explicit index
// arithmetic, leaky-relu after every conv, flatten channel-major, dot with FC.

inline double naive_stack_forward(const emosphere::Tensor3& x, const emosphere::StackWeights& w) {
  std::vector<double> act = x.data;
  std::size_t C = x.channels, H = x.height, W = x.width;
  for (const auto& L : w.conv) {
    const std::size_t Ho = (H - L.kernel_h) / L.stride_h + 1;
    const std::size_t Wo = (W - L.kernel_w) / L.stride_w + 1;
    std::vector<double> next(L.out_channels * Ho * Wo, 0.0);
    for (std::size_t o = 0; o < L.out_channels; ++o) {
      for (std::size_t i = 0; i < Ho; ++i) {
        for (std::size_t j = 0; j < Wo; ++j) {
          double s = L.bias[o];
          for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t ki = 0; ki < L.kernel_h; ++ki) {
              for (std::size_t kj = 0; kj < L.kernel_w; ++kj) {
                const double wt = L.weight[((o * L.in_channels + c) * L.kernel_h + ki) * L.kernel_w + kj];
                const double in = act[(c * H + i * L.stride_h + ki) * W + j * L.stride_w + kj];
                s += wt * in;
              }
            }
          }
          next[(o * Ho + i) * Wo + j] = s >= 0.0 ? s : w.leaky_slope * s;
        }
      }
    }
    act = std::move(next);
    C = L.out_channels;
    H = Ho;
    W = Wo;
  }
  double out = w.fc_bias;
  for (std::size_t k = 0; k < act.size(); ++k) out += w.fc_weight[k] * act[k];
  return out;
}

// ---------------------------------------------------------------------------
// Encoder oracle: evaluates each stage with explicit loops, no shared helpers.

inline std::vector<double> stepwise_encoder(const emosphere::Vec3& style, double intensity, std::size_t row,
                                            const emosphere::EncoderWeights& w) {
  const std::size_t P = w.branch_width;
  const std::size_t H = 2 * P;
  std::vector<double> cat(H);
  for (std::size_t i = 0; i < P; ++i) {
    double s = w.style_bias[i];
    for (std::size_t k = 0; k < 3; ++k) s += w.style_proj[i * 3 + k] * style[k];
    cat[i] = s;
    cat[P + i] = w.class_table[row * P + i];
  }
  for (auto& v : cat) v = std::log(1.0 + std::exp(v));
  double mean = 0.0;
  for (double v : cat) mean += v;
  mean /= static_cast<double>(H);
  double var = 0.0;
  for (double v : cat) var += (v - mean) * (v - mean);
  var /= static_cast<double>(H);
  std::vector<double> out(H);
  for (std::size_t i = 0; i < H; ++i) {
    const double z = (cat[i] - mean) / std::sqrt(var + w.ln_eps) * w.ln_gamma[i] + w.ln_beta[i];
    out[i] = z + (w.intensity_proj[i] * intensity + w.intensity_bias[i]);
  }
  return out;
}

// Hand-fixed P=2 weights with two emotions.
inline emosphere::EncoderWeights toy_encoder_weights() {
  emosphere::EncoderWeights w;
  w.branch_width = 2;
  w.style_proj = {0.5, -0.25, 0.125, -0.3, 0.7, 0.2};
  w.style_bias = {0.05, -0.1};
  w.class_table = {0.3, -0.2, -0.4, 0.6};
  w.intensity_proj = {0.9, -0.5, 0.25, 0.1};
  w.intensity_bias = {0.01, 0.02, -0.03, 0.04};
  w.ln_gamma = {1.1, 0.9, 1.0, 1.2};
  w.ln_beta = {0.0, 0.1, -0.1, 0.05};
  w.ln_eps = 1e-5;
  w.emotion_index = {{"angry", 0}, {"sad", 1}};
  return w;
}

// Weights whose concat(h_sty, h_cls) is a constant vector, so the layer
// norm output is exactly zero and h_emo reduces to the intensity branch.
inline emosphere::EncoderWeights collapse_encoder_weights(std::size_t P) {
  emosphere::EncoderWeights w;
  w.branch_width = P;
  w.style_proj.assign(3 * P, 0.0);
  w.style_bias.assign(P, 0.37);
  w.class_table.assign(P, 0.37);
  w.intensity_proj.resize(2 * P);
  w.intensity_bias.resize(2 * P);
  for (std::size_t i = 0; i < 2 * P; ++i) {
    w.intensity_proj[i] = 0.1 * static_cast<double>(i) - 0.3;
    w.intensity_bias[i] = 0.05 * static_cast<double>(i % 3);
  }
  w.ln_gamma.assign(2 * P, 1.0);
  w.ln_beta.assign(2 * P, 0.0);
  w.emotion_index = {{"angry", 0}};
  return w;
}

// ---------------------------------------------------------------------------
// Adversarial fixtures

// Discriminator stacks where D = 0.5 * clip[0][0] + 0.3 for every (window,
// kind): only the mel channel's top-left value reaches the output. A real mel
// of ones and a generated mel of zeros give D = 0.8 and D = 0.3.
inline emosphere::DiscriminatorWeights calibrated_discriminator(const std::vector<std::size_t>& windows,
                                                                std::size_t bins, std::size_t cond_width,
                                                                bool uncond) {
  auto w = emosphere::seed_init_discriminator(1, windows, bins, cond_width, uncond);
  for (auto& s : w.stacks) {
    for (auto& L : s.conv) {
      std::fill(L.weight.begin(), L.weight.end(), 0.0);
      std::fill(L.bias.begin(), L.bias.end(), 0.0);
      L.weight[0] = 1.0;  // out 0, in 0, kernel (0, 0)
    }
    std::fill(s.fc_weight.begin(), s.fc_weight.end(), 0.0);
    s.fc_weight[0] = 0.5;
    s.fc_bias = 0.3;
  }
  return w;
}

}  // namespace testing_support
