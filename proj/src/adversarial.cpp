#include "emosphere/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "emosphere/error.hpp"
#include "emosphere/prng.hpp"

namespace emosphere {

namespace {

std::size_t conv_out(std::size_t size, std::size_t kernel, std::size_t stride) {
  return size >= kernel ? (size - kernel) / stride + 1 : 0;
}

std::string shape_str(std::size_t c, std::size_t h, std::size_t w) {
  return "(" + std::to_string(c) + "," + std::to_string(h) + "," + std::to_string(w) + ")";
}

std::string stack_name(const StackWeights& w) {
  return "stack(t=" + std::to_string(w.window) + "," + std::string(cond_kind_name(w.kind)) + ")";
}

// Checks that layer shapes chain; returns the flattened FC input size.
std::size_t check_shapes(const StackWeights& w) {
  std::size_t c = w.in_channels, h = w.in_height, wd = w.in_width;
  if (c == 0 || h == 0 || wd == 0) throw Error(ErrorCode::ShapeMismatch, stack_name(w) + " has an empty input shape");
  for (std::size_t l = 0; l < w.conv.size(); ++l) {
    const auto& layer = w.conv[l];
    const std::string where = stack_name(w) + " conv " + std::to_string(l);
    if (layer.in_channels != c) {
      throw Error(ErrorCode::ShapeMismatch, where + " expects " + std::to_string(layer.in_channels) +
                                                " input channels, previous layer gives " + std::to_string(c));
    }
    if (layer.out_channels == 0 || layer.kernel_h == 0 || layer.kernel_w == 0 || layer.stride_h == 0 ||
        layer.stride_w == 0) {
      throw Error(ErrorCode::ShapeMismatch, where + " has a zero dimension");
    }
    if (layer.weight.size() != layer.out_channels * layer.in_channels * layer.kernel_h * layer.kernel_w ||
        layer.bias.size() != layer.out_channels) {
      throw Error(ErrorCode::ShapeMismatch, where + " weight or bias size does not match its declared shape");
    }
    const std::size_t oh = conv_out(h, layer.kernel_h, layer.stride_h);
    const std::size_t ow = conv_out(wd, layer.kernel_w, layer.stride_w);
    if (oh == 0 || ow == 0) {
      throw Error(ErrorCode::ShapeMismatch, where + " kernel does not fit input " + shape_str(c, h, wd));
    }
    c = layer.out_channels;
    h = oh;
    wd = ow;
  }
  const std::size_t flat = c * h * wd;
  if (w.fc_weight.size() != flat) {
    throw Error(ErrorCode::ShapeMismatch, stack_name(w) + " FC expects " + std::to_string(w.fc_weight.size()) +
                                              " inputs, conv stack produces " + std::to_string(flat));
  }
  return flat;
}

Tensor3 conv_forward(const Tensor3& in, const ConvLayer& layer) {
  Tensor3 out(layer.out_channels, conv_out(in.height, layer.kernel_h, layer.stride_h),
              conv_out(in.width, layer.kernel_w, layer.stride_w));
  const std::size_t kh = layer.kernel_h, kw = layer.kernel_w;
  for (std::size_t o = 0; o < out.channels; ++o) {
    for (std::size_t i = 0; i < out.height; ++i) {
      for (std::size_t j = 0; j < out.width; ++j) {
        double acc = layer.bias[o];
        for (std::size_t c = 0; c < in.channels; ++c) {
          const double* kernel = &layer.weight[((o * in.channels + c) * kh) * kw];
          for (std::size_t p = 0; p < kh; ++p) {
            const double* row = &in.data[(c * in.height + i * layer.stride_h + p) * in.width + j * layer.stride_w];
            for (std::size_t q = 0; q < kw; ++q) acc += kernel[p * kw + q] * row[q];
          }
        }
        out.at(o, i, j) = acc;
      }
    }
  }
  return out;
}

void conv_backward(const Tensor3& in, const ConvLayer& layer, const Tensor3& dout, ConvLayer& grad, Tensor3* din) {
  const std::size_t kh = layer.kernel_h, kw = layer.kernel_w;
  for (std::size_t o = 0; o < dout.channels; ++o) {
    for (std::size_t i = 0; i < dout.height; ++i) {
      for (std::size_t j = 0; j < dout.width; ++j) {
        const double g = dout.at(o, i, j);
        if (g == 0.0) continue;
        grad.bias[o] += g;
        for (std::size_t c = 0; c < in.channels; ++c) {
          const std::size_t kbase = ((o * in.channels + c) * kh) * kw;
          for (std::size_t p = 0; p < kh; ++p) {
            const std::size_t rbase = (c * in.height + i * layer.stride_h + p) * in.width + j * layer.stride_w;
            for (std::size_t q = 0; q < kw; ++q) {
              grad.weight[kbase + p * kw + q] += g * in.data[rbase + q];
              if (din != nullptr) din->data[rbase + q] += g * layer.weight[kbase + p * kw + q];
            }
          }
        }
      }
    }
  }
}

const ConditionEmbedding& condition_for(const SampleConditions& conds, CondKind kind) {
  static const ConditionEmbedding none{CondKind::none, {}};
  switch (kind) {
    case CondKind::speaker: return conds.speaker;
    case CondKind::emotion: return conds.emotion;
    case CondKind::none: return none;
  }
  return none;
}

void validate_batch(const GanBatch& batch) {
  const std::size_t n = batch.real.size();
  if (n == 0) throw Error(ErrorCode::BatchMismatch, "batch is empty");
  if (batch.fake.size() != n || batch.conds.size() != n || batch.starts.size() != n) {
    throw Error(ErrorCode::BatchMismatch, "real/fake/condition/offset counts differ (" + std::to_string(n) + " real, " +
                                              std::to_string(batch.fake.size()) + " fake, " +
                                              std::to_string(batch.conds.size()) + " condition sets)");
  }
  if (batch.windows.empty()) throw Error(ErrorCode::BatchMismatch, "no windows configured");
  for (std::size_t b = 0; b < n; ++b) {
    if (batch.starts[b].size() != batch.windows.size()) {
      throw Error(ErrorCode::BatchMismatch, "sample " + std::to_string(b) + " has " +
                                                std::to_string(batch.starts[b].size()) + " offsets for " +
                                                std::to_string(batch.windows.size()) + " windows");
    }
    if (batch.conds[b].speaker.kind != CondKind::speaker || batch.conds[b].emotion.kind != CondKind::emotion) {
      throw Error(ErrorCode::BatchMismatch, "sample " + std::to_string(b) + " condition kinds are mislabeled");
    }
  }
}

Tensor3 make_input(const GanBatch& batch, std::size_t b, std::size_t k, CondKind kind, Side side) {
  const Mel& mel = side == Side::real ? batch.real[b] : batch.fake[b];
  try {
    return broadcast_condition(condition_for(batch.conds[b], kind), random_clip(mel, batch.windows[k], batch.starts[b][k]));
  } catch (const Error& e) {
    throw Error(e.code(), std::string(side == Side::real ? "real" : "generated") + " sample " + std::to_string(b) +
                              ": " + e.detail());
  }
}

// d(term)/dD for one sample; the 1/B of the batch mean is applied by the caller.
double loss_slope(LossKind loss, Side side, double d) {
  if (loss == LossKind::generator) return side == Side::fake ? -2.0 * (1.0 - d) : 0.0;
  return side == Side::real ? -2.0 * (1.0 - d) : 2.0 * d;
}

}  // namespace

std::string_view cond_kind_name(CondKind kind) {
  switch (kind) {
    case CondKind::speaker: return "speaker";
    case CondKind::emotion: return "emotion";
    case CondKind::none: return "none";
  }
  return "none";
}

CondKind cond_kind_from_name(std::string_view name) {
  if (name == "speaker" || name == "spk") return CondKind::speaker;
  if (name == "emotion" || name == "emo") return CondKind::emotion;
  if (name == "none") return CondKind::none;
  throw Error(ErrorCode::InvalidArgument, "unknown condition kind '" + std::string(name) + "'");
}

const StackWeights& DiscriminatorWeights::stack(std::size_t window, CondKind kind) const {
  for (const auto& s : stacks) {
    if (s.window == window && s.kind == kind) return s;
  }
  throw Error(ErrorCode::ShapeMismatch, "no discriminator stack for window " + std::to_string(window) + " and kind " +
                                            std::string(cond_kind_name(kind)));
}

StackWeights& DiscriminatorWeights::stack(std::size_t window, CondKind kind) {
  return const_cast<StackWeights&>(std::as_const(*this).stack(window, kind));
}

void validate_stack(const StackWeights& w) {
  const std::size_t expected_channels = w.kind == CondKind::none ? 1 : 2;
  if (w.in_channels != expected_channels) {
    throw Error(ErrorCode::ShapeMismatch, stack_name(w) + " must take " + std::to_string(expected_channels) +
                                              " input channels, declares " + std::to_string(w.in_channels));
  }
  if (w.in_width != w.window) {
    throw Error(ErrorCode::ShapeMismatch, stack_name(w) + " input width must equal its window");
  }
  check_shapes(w);
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  bool ok = finite(w.fc_weight) && std::isfinite(w.fc_bias) && std::isfinite(w.leaky_slope);
  for (const auto& layer : w.conv) ok = ok && finite(layer.weight) && finite(layer.bias);
  if (!ok) throw Error(ErrorCode::DimensionMismatch, stack_name(w) + " has non-finite parameters");
}

std::size_t parameter_count(const DiscriminatorWeights& w) {
  std::size_t n = 0;
  for (const auto& s : w.stacks) {
    for (const auto& layer : s.conv) n += layer.weight.size() + layer.bias.size();
    n += s.fc_weight.size() + 1;
  }
  return n;
}

void for_each_parameter(DiscriminatorWeights& w, const std::function<void(double&)>& fn) {
  for (auto& s : w.stacks) {
    for (auto& layer : s.conv) {
      for (auto& x : layer.weight) fn(x);
      for (auto& x : layer.bias) fn(x);
    }
    for (auto& x : s.fc_weight) fn(x);
    fn(s.fc_bias);
  }
}

std::size_t stack_input_height(CondKind kind, std::size_t bins, std::size_t cond_width) {
  return kind == CondKind::none ? bins : std::max(bins, cond_width);
}

DiscriminatorWeights seed_init_discriminator(std::uint64_t seed, std::span<const std::size_t> windows, std::size_t bins,
                                             std::size_t cond_width, bool uncond_stack, const StackArch& arch) {
  if (windows.empty()) throw Error(ErrorCode::InvalidArgument, "at least one window is required");
  if (bins == 0 || cond_width == 0) throw Error(ErrorCode::InvalidArgument, "mel bins and condition width must be positive");
  if (arch.kernel == 0 || arch.stride == 0) throw Error(ErrorCode::InvalidArgument, "kernel and stride must be positive");
  SplitMix64 rng(seed);
  auto draw = [&](std::vector<double>& v, std::size_t n, std::size_t fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    v.resize(n);
    for (auto& x : v) x = rng.uniform(-bound, bound);
  };
  DiscriminatorWeights dw;
  for (CondKind kind : enabled_kinds(uncond_stack)) {
    for (std::size_t t : windows) {
      StackWeights s;
      s.window = t;
      s.kind = kind;
      s.in_channels = kind == CondKind::none ? 1 : 2;
      s.in_height = stack_input_height(kind, bins, cond_width);
      s.in_width = t;
      s.leaky_slope = arch.leaky_slope;
      std::size_t c = s.in_channels, h = s.in_height, w = s.in_width;
      for (std::size_t out : arch.channels) {
        ConvLayer layer;
        layer.out_channels = out;
        layer.in_channels = c;
        layer.kernel_h = layer.kernel_w = arch.kernel;
        layer.stride_h = layer.stride_w = arch.stride;
        const std::size_t fan_in = c * arch.kernel * arch.kernel;
        draw(layer.weight, out * fan_in, fan_in);
        draw(layer.bias, out, fan_in);
        h = conv_out(h, arch.kernel, arch.stride);
        w = conv_out(w, arch.kernel, arch.stride);
        if (h == 0 || w == 0) {
          throw Error(ErrorCode::ShapeMismatch,
                      "input " + std::to_string(s.in_height) + "x" + std::to_string(t) +
                          " is too small for the conv stack architecture");
        }
        c = out;
        s.conv.push_back(std::move(layer));
      }
      const std::size_t flat = c * h * w;
      draw(s.fc_weight, flat, flat);
      std::vector<double> fc_bias;
      draw(fc_bias, 1, flat);
      s.fc_bias = fc_bias[0];
      dw.stacks.push_back(std::move(s));
    }
  }
  return dw;
}

MelClip random_clip(const Mel& mel, std::size_t window, std::size_t start) {
  if (window == 0) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
  if (window > mel.frames) {
    throw Error(ErrorCode::WindowTooLong,
                "window " + std::to_string(window) + " exceeds " + std::to_string(mel.frames) + " frames");
  }
  if (start > mel.frames - window) {
    throw Error(ErrorCode::StartOutOfRange, "start " + std::to_string(start) + " + window " + std::to_string(window) +
                                                " exceeds " + std::to_string(mel.frames) + " frames");
  }
  MelClip clip;
  clip.bins = mel.bins;
  clip.window = window;
  clip.start = start;
  clip.data.resize(mel.bins * window);
  for (std::size_t f = 0; f < mel.bins; ++f) {
    std::copy_n(mel.data.begin() + static_cast<std::ptrdiff_t>(f * mel.frames + start), window,
                clip.data.begin() + static_cast<std::ptrdiff_t>(f * window));
  }
  return clip;
}

Tensor3 broadcast_condition(const ConditionEmbedding& cond, const MelClip& clip) {
  if (cond.kind == CondKind::none) {
    Tensor3 x(1, clip.bins, clip.window);
    std::copy(clip.data.begin(), clip.data.end(), x.data.begin());
    return x;
  }
  const std::size_t height = std::max(clip.bins, cond.values.size());
  Tensor3 x(2, height, clip.window);
  for (std::size_t f = 0; f < clip.bins; ++f) {
    for (std::size_t j = 0; j < clip.window; ++j) x.at(0, f, j) = clip.at(f, j);
  }
  for (std::size_t r = 0; r < cond.values.size(); ++r) {
    for (std::size_t j = 0; j < clip.window; ++j) x.at(1, r, j) = cond.values[r];
  }
  return x;
}

StackTrace disc_forward_trace(const Tensor3& x, const StackWeights& w) {
  if (x.channels != w.in_channels || x.height != w.in_height || x.width != w.in_width ||
      x.data.size() != x.channels * x.height * x.width) {
    throw Error(ErrorCode::ShapeMismatch, stack_name(w) + " expects input " +
                                              shape_str(w.in_channels, w.in_height, w.in_width) + ", got " +
                                              shape_str(x.channels, x.height, x.width));
  }
  check_shapes(w);
  StackTrace trace;
  trace.inputs.reserve(w.conv.size());
  trace.pre.reserve(w.conv.size());
  Tensor3 current = x;
  for (const auto& layer : w.conv) {
    Tensor3 pre = conv_forward(current, layer);
    Tensor3 post = pre;
    for (auto& v : post.data) v = v > 0.0 ? v : w.leaky_slope * v;
    trace.inputs.push_back(std::move(current));
    trace.pre.push_back(std::move(pre));
    current = std::move(post);
  }
  trace.flat = std::move(current.data);
  double out = w.fc_bias;
  for (std::size_t i = 0; i < trace.flat.size(); ++i) out += w.fc_weight[i] * trace.flat[i];
  trace.output = out;
  return trace;
}

double disc_forward(const Tensor3& x, const StackWeights& w) { return disc_forward_trace(x, w).output; }

void disc_backward(const StackTrace& trace, const StackWeights& w, double upstream, StackWeights& grad,
                   Tensor3* input_grad) {
  grad.fc_bias += upstream;
  for (std::size_t i = 0; i < trace.flat.size(); ++i) grad.fc_weight[i] += upstream * trace.flat[i];
  if (w.conv.empty()) {
    if (input_grad != nullptr) {
      for (std::size_t i = 0; i < trace.flat.size(); ++i) input_grad->data[i] += upstream * w.fc_weight[i];
    }
    return;
  }
  const Tensor3& last_pre = trace.pre.back();
  Tensor3 dpost(last_pre.channels, last_pre.height, last_pre.width);
  for (std::size_t i = 0; i < dpost.data.size(); ++i) dpost.data[i] = upstream * w.fc_weight[i];
  for (std::size_t l = w.conv.size(); l-- > 0;) {
    const Tensor3& pre = trace.pre[l];
    Tensor3& dpre = dpost;
    for (std::size_t i = 0; i < dpre.data.size(); ++i) {
      if (!(pre.data[i] > 0.0)) dpre.data[i] *= w.leaky_slope;
    }
    const Tensor3& in = trace.inputs[l];
    if (l == 0) {
      conv_backward(in, w.conv[l], dpre, grad.conv[l], input_grad);
    } else {
      Tensor3 din(in.channels, in.height, in.width);
      conv_backward(in, w.conv[l], dpre, grad.conv[l], &din);
      dpost = std::move(din);
    }
  }
}

std::vector<CondKind> enabled_kinds(bool uncond_stack) {
  std::vector<CondKind> kinds{CondKind::speaker, CondKind::emotion};
  if (uncond_stack) kinds.push_back(CondKind::none);
  return kinds;
}

std::vector<std::vector<std::size_t>> draw_clip_starts(std::uint64_t seed, std::span<const Mel> real,
                                                       std::span<const Mel> fake,
                                                       std::span<const std::size_t> windows) {
  if (real.size() != fake.size()) throw Error(ErrorCode::BatchMismatch, "real and generated mel counts differ");
  SplitMix64 rng(seed);
  std::vector<std::vector<std::size_t>> starts(real.size());
  for (std::size_t b = 0; b < real.size(); ++b) {
    const std::size_t frames = std::min(real[b].frames, fake[b].frames);
    for (std::size_t t : windows) {
      if (t == 0) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
      if (t > frames) {
        throw Error(ErrorCode::WindowTooLong, "sample " + std::to_string(b) + ": window " + std::to_string(t) +
                                                  " exceeds " + std::to_string(frames) + " frames");
      }
      starts[b].push_back(static_cast<std::size_t>(rng.uniform_int(0, frames - t)));
    }
  }
  return starts;
}

Scorer network_scorer(const DiscriminatorWeights& w) {
  for (const auto& s : w.stacks) validate_stack(s);
  return [&w](const Tensor3& x, std::size_t window, CondKind kind, Side) { return disc_forward(x, w.stack(window, kind)); };
}

Scorer constant_scorer(double on_real, double on_fake) {
  return [on_real, on_fake](const Tensor3&, std::size_t, CondKind, Side side) {
    return side == Side::real ? on_real : on_fake;
  };
}

GanLosses gan_losses(const GanBatch& batch, const Scorer& scorer) {
  validate_batch(batch);
  const std::size_t n = batch.real.size();
  const auto inv_n = 1.0 / static_cast<double>(n);
  GanLosses out;
  std::vector<LossTerm> g_terms;
  for (CondKind kind : enabled_kinds(batch.uncond_stack)) {
    for (std::size_t k = 0; k < batch.windows.size(); ++k) {
      const std::size_t t = batch.windows[k];
      double real_sum = 0.0, fake_sum = 0.0, gen_sum = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        const double d_real = scorer(make_input(batch, b, k, kind, Side::real), t, kind, Side::real);
        const double d_fake = scorer(make_input(batch, b, k, kind, Side::fake), t, kind, Side::fake);
        real_sum += (1.0 - d_real) * (1.0 - d_real);
        fake_sum += d_fake * d_fake;
        gen_sum += (1.0 - d_fake) * (1.0 - d_fake);
      }
      out.terms.push_back({LossKind::discriminator, t, kind, Side::real, real_sum * inv_n});
      out.terms.push_back({LossKind::discriminator, t, kind, Side::fake, fake_sum * inv_n});
      g_terms.push_back({LossKind::generator, t, kind, Side::fake, gen_sum * inv_n});
    }
  }
  for (const auto& term : out.terms) out.loss_d += term.value;
  for (const auto& term : g_terms) out.loss_g += term.value;
  out.terms.insert(out.terms.end(), g_terms.begin(), g_terms.end());
  return out;
}

GanLosses gan_losses(const GanBatch& batch, const DiscriminatorWeights& w) { return gan_losses(batch, network_scorer(w)); }

GanGradients gan_gradients(const GanBatch& batch, const DiscriminatorWeights& w, LossKind loss) {
  validate_batch(batch);
  for (const auto& s : w.stacks) validate_stack(s);
  const std::size_t n = batch.real.size();
  const auto inv_n = 1.0 / static_cast<double>(n);

  GanGradients grads;
  grads.params = w;
  for_each_parameter(grads.params, [](double& x) { x = 0.0; });
  for (const auto& m : batch.real) grads.real.emplace_back(m.bins, m.frames);
  for (const auto& m : batch.fake) grads.fake.emplace_back(m.bins, m.frames);

  for (CondKind kind : enabled_kinds(batch.uncond_stack)) {
    for (std::size_t k = 0; k < batch.windows.size(); ++k) {
      const std::size_t t = batch.windows[k];
      const StackWeights& stack = w.stack(t, kind);
      StackWeights& stack_grad = grads.params.stack(t, kind);
      for (std::size_t b = 0; b < n; ++b) {
        for (Side side : {Side::real, Side::fake}) {
          const Tensor3 x = make_input(batch, b, k, kind, side);
          const StackTrace trace = disc_forward_trace(x, stack);
          const double upstream = loss_slope(loss, side, trace.output) * inv_n;
          if (upstream == 0.0) continue;
          Tensor3 dx(x.channels, x.height, x.width);
          disc_backward(trace, stack, upstream, stack_grad, &dx);
          Mel& target = side == Side::real ? grads.real[b] : grads.fake[b];
          const std::size_t start = batch.starts[b][k];
          for (std::size_t f = 0; f < target.bins; ++f) {
            for (std::size_t j = 0; j < t; ++j) target.at(f, start + j) += dx.at(0, f, j);
          }
        }
      }
    }
  }
  return grads;
}

GanGradients loss_gradients(const GanBatch& batch, const DiscriminatorWeights& w, GradTarget target) {
  return gan_gradients(batch, w, target == GradTarget::disc_params ? LossKind::discriminator : LossKind::generator);
}

}  // namespace emosphere
