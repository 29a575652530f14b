#pragma once

#include <cstddef>
#include <cstdint>

#include "emosphere/adversarial.hpp"

namespace emosphere {

struct GradCheckConfig {
  double step = 1e-5;       // central-difference step
  double threshold = 1e-3;  // pass if max relative error is below this
  double floor = 1e-6;      // denominators never drop below this magnitude
};

struct GradCheckReport {
  std::size_t params_checked = 0;
  std::size_t inputs_checked = 0;
  double max_rel_err_params = 0.0;      // d loss_d / d params
  double max_rel_err_fake_input = 0.0;  // d loss_g / d generated mel
  bool passed = false;

  double max_rel_err() const { return max_rel_err_params > max_rel_err_fake_input ? max_rel_err_params : max_rel_err_fake_input; }
};

/// |a - n| / max(|a|, |n|, floor)
double relative_error(double analytic, double numeric, double floor);

/// Compares reverse-mode gradients against central finite differences of the
/// forward losses, for every discriminator parameter and every generated-mel
/// entry.
GradCheckReport check_gradients(const GanBatch& batch, const DiscriminatorWeights& w, const GradCheckConfig& config = {});

/// A desk-sized seeded problem: 2 samples of 8-bin x 12-frame mels, condition
/// width 5, windows {8, 10}, default stack architecture.
struct GradCheckFixture {
  GanBatch batch;
  DiscriminatorWeights weights;
};

GradCheckFixture tiny_gradcheck_fixture(std::uint64_t seed, bool uncond_stack = true);

}  // namespace emosphere
