#include "emosphere/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "emosphere/prng.hpp"

namespace emosphere {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckReport check_gradients(const GanBatch& batch, const DiscriminatorWeights& w, const GradCheckConfig& config) {
  GradCheckReport report;
  const double h = config.step;

  const auto param_grads = loss_gradients(batch, w, GradTarget::disc_params);
  std::vector<double> analytic;
  DiscriminatorWeights grad_copy = param_grads.params;
  for_each_parameter(grad_copy, [&](double& g) { analytic.push_back(g); });

  DiscriminatorWeights probe = w;
  std::vector<double*> params;
  for_each_parameter(probe, [&](double& p) { params.push_back(&p); });
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    *params[i] = saved + h;
    const double up = gan_losses(batch, probe).loss_d;
    *params[i] = saved - h;
    const double down = gan_losses(batch, probe).loss_d;
    *params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    report.max_rel_err_params = std::max(report.max_rel_err_params, relative_error(analytic[i], numeric, config.floor));
  }
  report.params_checked = params.size();

  const auto input_grads = loss_gradients(batch, w, GradTarget::fake_input);
  GanBatch moved = batch;
  for (std::size_t b = 0; b < moved.fake.size(); ++b) {
    auto& values = moved.fake[b].data;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double up = gan_losses(moved, w).loss_g;
      values[i] = saved - h;
      const double down = gan_losses(moved, w).loss_g;
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      report.max_rel_err_fake_input =
          std::max(report.max_rel_err_fake_input, relative_error(input_grads.fake[b].data[i], numeric, config.floor));
      ++report.inputs_checked;
    }
  }
  report.passed = report.max_rel_err() < config.threshold;
  return report;
}

GradCheckFixture tiny_gradcheck_fixture(std::uint64_t seed, bool uncond_stack) {
  constexpr std::size_t kBins = 8, kFrames = 12, kCondWidth = 5, kBatch = 2;
  const std::vector<std::size_t> windows{8, 10};
  SplitMix64 rng(seed);
  GradCheckFixture fx;
  auto random_mel = [&] {
    Mel m(kBins, kFrames);
    for (auto& v : m.data) v = rng.uniform(-1.0, 1.0);
    return m;
  };
  auto random_cond = [&](CondKind kind) {
    ConditionEmbedding c{kind, std::vector<double>(kCondWidth)};
    for (auto& v : c.values) v = rng.uniform(-1.0, 1.0);
    return c;
  };
  for (std::size_t b = 0; b < kBatch; ++b) {
    fx.batch.real.push_back(random_mel());
    fx.batch.fake.push_back(random_mel());
    fx.batch.conds.push_back({random_cond(CondKind::speaker), random_cond(CondKind::emotion)});
  }
  fx.batch.windows = windows;
  fx.batch.uncond_stack = uncond_stack;
  fx.batch.starts = draw_clip_starts(rng.next(), fx.batch.real, fx.batch.fake, windows);
  fx.weights = seed_init_discriminator(rng.next(), windows, kBins, kCondWidth, uncond_stack);
  return fx;
}

}  // namespace emosphere
