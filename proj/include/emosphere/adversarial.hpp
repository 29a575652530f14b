#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace emosphere {

inline constexpr std::array<std::size_t, 3> kDefaultWindows{32, 64, 96};
inline constexpr std::size_t kDefaultConditionWidth = 128;
inline constexpr std::size_t kDefaultMelBins = 80;
inline constexpr double kDefaultLeakySlope = 0.2;

/// Mel spectrogram, F bins by T frames, stored feature-major (row f holds all
/// frames of bin f).
struct Mel {
  std::size_t bins = 0;
  std::size_t frames = 0;
  std::vector<double> data;

  Mel() = default;
  Mel(std::size_t f, std::size_t t, double fill = 0.0) : bins(f), frames(t), data(f * t, fill) {}

  double& at(std::size_t f, std::size_t t) { return data[f * frames + t]; }
  double at(std::size_t f, std::size_t t) const { return data[f * frames + t]; }

  bool operator==(const Mel&) const = default;
};

/// A contiguous window of frames copied out of a Mel.
struct MelClip {
  std::size_t bins = 0;
  std::size_t window = 0;
  std::size_t start = 0;
  std::vector<double> data;  // bins x window

  double at(std::size_t f, std::size_t j) const { return data[f * window + j]; }
};

enum class CondKind { speaker, emotion, none };
std::string_view cond_kind_name(CondKind kind);
CondKind cond_kind_from_name(std::string_view name);

struct ConditionEmbedding {
  CondKind kind = CondKind::none;
  std::vector<double> values;  // empty for CondKind::none
};

/// Dense channels x height x width tensor, row-major.
struct Tensor3 {
  std::size_t channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> data;

  Tensor3() = default;
  Tensor3(std::size_t c, std::size_t h, std::size_t w, double fill = 0.0)
      : channels(c), height(h), width(w), data(c * h * w, fill) {}

  double& at(std::size_t c, std::size_t h, std::size_t w) { return data[(c * height + h) * width + w]; }
  double at(std::size_t c, std::size_t h, std::size_t w) const { return data[(c * height + h) * width + w]; }
};

// Kernel is out x in x kh x kw, row-major. Valid padding.
struct ConvLayer {
  std::size_t out_channels = 0;
  std::size_t in_channels = 0;
  std::size_t kernel_h = 0;
  std::size_t kernel_w = 0;
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  std::vector<double> weight;
  std::vector<double> bias;
};

/// One conv stack D_t for a (window, condition kind) pair: conv layers each
/// followed by leaky-relu, then flatten and a fully connected layer to one
/// scalar (no activation on the output).
struct StackWeights {
  std::size_t window = 0;
  CondKind kind = CondKind::none;
  std::size_t in_channels = 0;
  std::size_t in_height = 0;
  std::size_t in_width = 0;
  double leaky_slope = kDefaultLeakySlope;
  std::vector<ConvLayer> conv;
  std::vector<double> fc_weight;
  double fc_bias = 0.0;
};

struct DiscriminatorWeights {
  std::vector<StackWeights> stacks;

  /// ShapeMismatch when no stack is registered for the pair.
  const StackWeights& stack(std::size_t window, CondKind kind) const;
  StackWeights& stack(std::size_t window, CondKind kind);
};

struct StackArch {
  std::vector<std::size_t> channels{8, 16};
  std::size_t kernel = 3;
  std::size_t stride = 2;
  double leaky_slope = kDefaultLeakySlope;
};

/// Throws ShapeMismatch when the layer shapes do not chain from the declared
/// input to a single scalar, DimensionMismatch on non-finite values.
void validate_stack(const StackWeights& w);

/// Number of trainable scalars in a set of stacks.
std::size_t parameter_count(const DiscriminatorWeights& w);

/// Visits every trainable scalar in a fixed order: stacks in order; per stack
/// each conv layer's weight then bias, then the FC weight, then the FC bias.
void for_each_parameter(DiscriminatorWeights& w, const std::function<void(double&)>& fn);

/// Height of a conditioned input: the clip and the tiled condition share
/// max(F, C) rows. Unconditioned input keeps F.
std::size_t stack_input_height(CondKind kind, std::size_t bins, std::size_t cond_width);

/// Draws every parameter uniform in +-1/sqrt(fan_in) from SplitMix64(seed).
/// Stacks are laid out kind-major (speaker, emotion, then none when enabled),
/// windows in the order given.
DiscriminatorWeights seed_init_discriminator(std::uint64_t seed, std::span<const std::size_t> windows, std::size_t bins,
                                             std::size_t cond_width, bool uncond_stack, const StackArch& arch = {});

/// WindowTooLong when t > T, StartOutOfRange when start > T - t.
MelClip random_clip(const Mel& mel, std::size_t window, std::size_t start);

/// Channel 0 is the clip, channel 1 (if the kind is not none) the condition
/// repeated at every frame. Both are zero-padded along the feature axis to
/// max(F, C) rows.
Tensor3 broadcast_condition(const ConditionEmbedding& cond, const MelClip& clip);

double disc_forward(const Tensor3& x, const StackWeights& w);

/// Activations kept from a forward pass, for backpropagation.
struct StackTrace {
  std::vector<Tensor3> inputs;  // inputs[l] feeds conv layer l
  std::vector<Tensor3> pre;     // pre-activation of conv layer l
  std::vector<double> flat;     // FC input
  double output = 0.0;
};

StackTrace disc_forward_trace(const Tensor3& x, const StackWeights& w);

/// Accumulates d(output)/d(params) * upstream into grad (same shape as w) and,
/// when input_grad is non-null, d(output)/d(input) * upstream into it.
void disc_backward(const StackTrace& trace, const StackWeights& w, double upstream, StackWeights& grad,
                   Tensor3* input_grad);

struct SampleConditions {
  ConditionEmbedding speaker;
  ConditionEmbedding emotion;
};

/// One adversarial step's inputs. starts[b][k] is the clip offset for sample
/// b and windows[k]; the same offset is used for the real and the generated
/// mel and for every condition kind.
struct GanBatch {
  std::vector<Mel> real;
  std::vector<Mel> fake;
  std::vector<SampleConditions> conds;
  std::vector<std::size_t> windows;
  std::vector<std::vector<std::size_t>> starts;
  bool uncond_stack = true;
};

/// Condition kinds summed over: speaker and emotion, then none if enabled.
std::vector<CondKind> enabled_kinds(bool uncond_stack);

/// Offsets drawn uniformly in [0, min(T_real, T_fake) - t] per sample and
/// window, samples outer, windows inner.
std::vector<std::vector<std::size_t>> draw_clip_starts(std::uint64_t seed, std::span<const Mel> real,
                                                       std::span<const Mel> fake,
                                                       std::span<const std::size_t> windows);

enum class LossKind { discriminator, generator };
enum class Side { real, fake };

struct LossTerm {
  LossKind loss = LossKind::discriminator;
  std::size_t window = 0;
  CondKind kind = CondKind::none;
  Side side = Side::real;
  double value = 0.0;
};

/// Least-squares losses summed over condition kinds and windows, expectation
/// taken as the batch mean:
///   loss_d = sum_c sum_t mean_b[(1 - D(y)) ^ 2] + mean_b[D(y_hat) ^ 2]
///   loss_g = sum_c sum_t mean_b[(1 - D(y_hat)) ^ 2]
/// Terms are reduced kind-major, then window, then (real, fake), then sample,
/// so totals equal the in-order sum of `terms`.
struct GanLosses {
  double loss_d = 0.0;
  double loss_g = 0.0;
  std::vector<LossTerm> terms;
};

/// Scores one discriminator input. `side` lets test stubs answer differently
/// for real and generated clips; the conv network ignores it.
using Scorer = std::function<double(const Tensor3& input, std::size_t window, CondKind kind, Side side)>;

Scorer network_scorer(const DiscriminatorWeights& w);
Scorer constant_scorer(double on_real, double on_fake);

GanLosses gan_losses(const GanBatch& batch, const Scorer& scorer);
GanLosses gan_losses(const GanBatch& batch, const DiscriminatorWeights& w);

/// Gradients of one loss with respect to every discriminator parameter and
/// every entry of the real and generated mels.
struct GanGradients {
  DiscriminatorWeights params;
  std::vector<Mel> real;
  std::vector<Mel> fake;
};

GanGradients gan_gradients(const GanBatch& batch, const DiscriminatorWeights& w, LossKind loss);

enum class GradTarget { disc_params, fake_input };

/// disc_params: gradients of loss_d. fake_input: gradients of loss_g.
GanGradients loss_gradients(const GanBatch& batch, const DiscriminatorWeights& w, GradTarget target);

}  // namespace emosphere
