// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. The end-to-end and robustness checks drive the real CLI
// binary as a subprocess.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "emosphere/adversarial.hpp"
#include "emosphere/adversarial_io.hpp"
#include "emosphere/avd.hpp"
#include "emosphere/control.hpp"
#include "emosphere/encoder.hpp"
#include "emosphere/error.hpp"
#include "emosphere/gradcheck.hpp"
#include "emosphere/io.hpp"
#include "emosphere/sphere.hpp"
#include "emosphere/synthetic.hpp"
#include "support.hpp"

using namespace emosphere;
namespace fs = std::filesystem;
using testing_support::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failing check; later details are appended as context.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && pass_) {
      pass_ = false;
      failure_ = what;
    }
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Outcome outcome() const { return {pass_, pass_ ? notes_ : failure_ + (notes_.empty() ? "" : " | " + notes_)}; }

 private:
  bool pass_ = true;
  std::string failure_;
  std::string notes_;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

template <class F>
bool throws_code(ErrorCode code, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Checks c;
  SphereModel model;
  model.center = {{0.5, 0.5, 0.5}};
  model.fences["angry"] = {0.0, 1.0};
  const auto s = transform({"x", "s", "angry", 1.0, 0.0, 1.0}, model);
  const auto o = testing_support::scalar_spherical(1.0 - 0.5, 0.0 - 0.5, 1.0 - 0.5);
  c.expect(std::abs(s.r - 0.8660254) <= 1e-6 && std::abs(s.r - o.r) <= 1e-6, "r");
  c.expect(std::abs(s.theta - 0.9553166) <= 1e-6 && std::abs(s.theta - o.theta) <= 1e-6, "theta");
  c.expect(std::abs(s.phi + std::numbers::pi / 4) <= 1e-6 && std::abs(s.phi - o.phi) <= 1e-6, "phi");
  c.expect(std::abs(*s.r_norm - 0.8660254) <= 1e-6, "r_norm");
  c.expect(*s.octant == 5 && testing_support::angle_octant(o.theta, o.phi) == 5, "octant");
  c.note("r=" + format_double(s.r) + " theta=" + format_double(s.theta) + " phi=" + format_double(s.phi) +
         " octant=" + std::to_string(*s.octant));
  return c.outcome();
}

Outcome ac2() {
  Checks c;
  Gen g(20261016);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    SphericalPoint s{g.real(1e-6, 2.0), g.real(0.0, std::numbers::pi), g.real(-std::numbers::pi, std::numbers::pi),
                     {}, {}};
    if (s.phi == -std::numbers::pi) s.phi = std::numbers::pi;
    const auto b = to_spherical(from_spherical(s));
    const double err = std::max({std::abs(b.r - s.r), std::abs(b.theta - s.theta), std::abs(b.phi - s.phi)});
    worst = std::max(worst, err);
    failures += err > 1e-9;
  }
  c.expect(failures == 0, std::to_string(failures) + " round-trip failures");
  c.note("10000 points, max field error " + fmt(worst));
  return c.outcome();
}

Outcome ac3() {
  Checks c;
  Gen g(3);
  int mismatches = 0, tested = 0;
  while (tested < 10000) {
    const CenteredPoint p{g.real(-1, 1), g.real(-1, 1), g.real(-1, 1)};
    if (std::abs(p.da) < 1e-9 || std::abs(p.dv) < 1e-9 || std::abs(p.dd) < 1e-9) continue;
    ++tested;
    const auto s = to_spherical(p);
    mismatches += quantize_octant(p) != testing_support::angle_octant(s.theta, s.phi);
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " octant mismatches");
  c.note("10000 points, " + std::to_string(mismatches) + " mismatches");
  return c.outcome();
}

Outcome ac4() {
  Checks c;
  const std::vector<double> five{1, 2, 3, 4, 5};
  const auto f = fit_radius_fences(five);
  c.expect(f.lo == 0.0 && f.hi == 7.0, "[1..5] fences " + format_double(f.lo) + ".." + format_double(f.hi));
  Gen g(4);
  std::vector<double> r(10000);
  for (auto& x : r) x = g.real(0.0, 2.0) * g.real(0.0, 1.0);
  const double q1 = testing_support::brute_quantile(r, 0.25);
  const double q3 = testing_support::brute_quantile(r, 0.75);
  const auto big = fit_radius_fences(r);
  const double dlo = std::abs(big.lo - std::max(0.0, q1 - 1.5 * (q3 - q1)));
  const double dhi = std::abs(big.hi - (q3 + 1.5 * (q3 - q1)));
  c.expect(dlo <= 1e-12 && dhi <= 1e-12, "10000-sample fences off by " + fmt(std::max(dlo, dhi)));
  const std::vector<double> flat(16, 0.42);
  c.expect(throws_code(ErrorCode::DegenerateScale, [&] { fit_radius_fences(flat); }), "all-equal radii");
  c.note("lo=0 hi=7; oracle diff " + fmt(std::max(dlo, dhi)) + "; all-equal -> DegenerateScale");
  return c.outcome();
}

Outcome ac5() {
  Checks c;
  const auto collapse = testing_support::collapse_encoder_weights(128);
  bool exact = true;
  for (double i : {0.0, 0.25, 0.9}) {
    const auto h = encode_emotion({0.0, 0.6, 0.8}, i, "angry", collapse).values;
    for (std::size_t k = 0; k < h.size(); ++k) {
      exact = exact && h[k] == collapse.intensity_proj[k] * i + collapse.intensity_bias[k];
    }
  }
  c.expect(exact, "LN collapse not bit-exact");

  const auto toy = testing_support::toy_encoder_weights();
  Gen g(5);
  double toy_err = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Vec3 s{g.real(-1, 1), g.real(-1, 1), g.real(-1, 1)};
    const double in = g.unit();
    const std::string emo = t % 2 ? "sad" : "angry";
    const auto got = encode_emotion(s, in, emo, toy).values;
    const auto want = testing_support::stepwise_encoder(s, in, toy.emotion_index.at(emo), toy);
    for (std::size_t k = 0; k < got.size(); ++k) toy_err = std::max(toy_err, std::abs(got[k] - want[k]));
  }
  c.expect(toy_err <= 1e-12, "toy P=2 error " + fmt(toy_err));

  const std::vector<std::string> emos{"neutral", "angry", "happy", "sad", "surprise"};
  const auto w = seed_init_encoder(42, emos);
  double lin_err = 0.0;
  std::vector<std::vector<double>> e;
  const double levels[3] = {0.1, 0.5, 0.9};
  for (double lv : levels) e.push_back(encode_emotion(octant_style_vector(7), lv, "angry", w).values);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < a; ++b) {
      for (std::size_t k = 0; k < e[0].size(); ++k) {
        lin_err = std::max(lin_err, std::abs((e[a][k] - e[b][k]) - (levels[a] - levels[b]) * w.intensity_proj[k]));
      }
    }
  }
  c.expect(lin_err <= 1e-9, "collinearity error " + fmt(lin_err));

  c.expect(std::abs(softplus(0.0) - std::log(2.0)) <= 1e-6, "softplus(0)");
  const std::vector<double> v{1, 2, 3}, ones(3, 1.0), zeros(3, 0.0);
  const auto ln = layer_norm(v, ones, zeros, 0.0);
  c.expect(std::abs(ln[0] + 1.2247449) <= 1e-6 && std::abs(ln[1]) <= 1e-6 && std::abs(ln[2] - 1.2247449) <= 1e-6,
           "layer_norm([1,2,3])");
  c.note("collapse bit-exact; toy err " + fmt(toy_err) + "; collinearity err " + fmt(lin_err));
  return c.outcome();
}

Outcome ac6() {
  Checks c;
  Gen g(6);
  GanBatch b;
  for (int i = 0; i < 3; ++i) {
    Mel real(80, 128), fake(80, 128);
    for (auto& x : real.data) x = g.real(-4, 0);
    for (auto& x : fake.data) x = g.real(-4, 0);
    b.real.push_back(real);
    b.fake.push_back(fake);
    b.conds.push_back({{CondKind::speaker, std::vector<double>(128, 0.1)}, {CondKind::emotion, std::vector<double>(128, 0.2)}});
  }
  b.windows = {32, 64, 96};
  b.starts = draw_clip_starts(6, b.real, b.fake, b.windows);
  const auto ideal_d = gan_losses(b, constant_scorer(1.0, 0.0));
  const auto ideal_g = gan_losses(b, constant_scorer(1.0, 1.0));
  c.expect(ideal_d.loss_d == 0.0, "ideal discriminator loss_d = " + format_double(ideal_d.loss_d));
  c.expect(ideal_g.loss_g == 0.0, "ideal generator loss_g = " + format_double(ideal_g.loss_g));

  // Single sample, two conditions, three windows, unconditional stack off.
  GanBatch one;
  one.real.push_back(Mel(80, 128, 1.0));
  one.fake.push_back(Mel(80, 128, 0.0));
  one.conds.push_back({{CondKind::speaker, std::vector<double>(128, 0.3)}, {CondKind::emotion, std::vector<double>(128, -0.3)}});
  one.windows = {32, 64, 96};
  one.uncond_stack = false;
  one.starts = draw_clip_starts(1, one.real, one.fake, one.windows);
  const double d_oracle = 6.0 * ((1.0 - 0.8) * (1.0 - 0.8) + 0.3 * 0.3);
  const double g_oracle = 6.0 * (1.0 - 0.3) * (1.0 - 0.3);
  const auto stub = gan_losses(one, constant_scorer(0.8, 0.3));
  const auto net = gan_losses(one, testing_support::calibrated_discriminator(one.windows, 80, 128, false));
  for (const auto* l : {&stub, &net}) {
    c.expect(std::abs(l->loss_d - 0.78) <= 1e-9 && std::abs(l->loss_d - d_oracle) <= 1e-9,
             "loss_d = " + format_double(l->loss_d));
    c.expect(std::abs(l->loss_g - 2.94) <= 1e-9 && std::abs(l->loss_g - g_oracle) <= 1e-9,
             "loss_g = " + format_double(l->loss_g));
  }
  c.note("stubs 0/0; stub scorer " + format_double(stub.loss_d) + "/" + format_double(stub.loss_g) +
         "; calibrated network " + format_double(net.loss_d) + "/" + format_double(net.loss_g));
  return c.outcome();
}

// Central differences computed here, independently of the library's checker.
Outcome ac7() {
  Checks c;
  const auto t0 = std::chrono::steady_clock::now();
  const double h = 1e-5;
  double worst = 0.0;
  std::size_t per_stack = 0, total = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto fx = tiny_gradcheck_fixture(seed, true);
    auto& w = fx.weights;
    auto& batch = fx.batch;
    per_stack = 0;
    for (auto& s : w.stacks) {
      DiscriminatorWeights single{{s}};
      per_stack = std::max(per_stack, parameter_count(single));
    }
    auto grads = loss_gradients(batch, w, GradTarget::disc_params).params;
    std::vector<double> analytic;
    for_each_parameter(grads, [&](double& p) { analytic.push_back(p); });
    std::size_t i = 0;
    for_each_parameter(w, [&](double& p) {
      const double saved = p;
      p = saved + h;
      const double up = gan_losses(batch, w).loss_d;
      p = saved - h;
      const double dn = gan_losses(batch, w).loss_d;
      p = saved;
      const double num = (up - dn) / (2 * h);
      worst = std::max(worst, std::abs(analytic[i] - num) / std::max({std::abs(analytic[i]), std::abs(num), 1e-6}));
      ++i;
    });
    total = i;
    const auto gf = loss_gradients(batch, w, GradTarget::fake_input).fake;
    for (std::size_t b = 0; b < batch.fake.size(); ++b) {
      for (std::size_t k = 0; k < batch.fake[b].data.size(); ++k) {
        double& x = batch.fake[b].data[k];
        const double saved = x;
        x = saved + h;
        const double up = gan_losses(batch, w).loss_g;
        x = saved - h;
        const double dn = gan_losses(batch, w).loss_g;
        x = saved;
        const double num = (up - dn) / (2 * h);
        const double a = gf[b].data[k];
        worst = std::max(worst, std::abs(a - num) / std::max({std::abs(a), std::abs(num), 1e-6}));
      }
    }
  }
  const double secs = seconds_since(t0);
  c.expect(worst < 1e-3, "max relative error " + fmt(worst));
  c.expect(secs < 120.0, "runtime " + fmt(secs) + " s");
  c.note("3 seeds, " + std::to_string(total) + " params (" + std::to_string(per_stack) +
         " per stack) + fake mel; max rel err " + fmt(worst) + " in " + fmt(secs) + " s");
  return c.outcome();
}

Outcome ac8() {
  Checks c;
  c.expect(intensity_preset(IntensityPreset::weak) == 0.1 && intensity_preset(IntensityPreset::medium) == 0.5 &&
               intensity_preset(IntensityPreset::strong) == 0.9,
           "preset table");
  c.expect(std::vector<std::size_t>(kDefaultWindows.begin(), kDefaultWindows.end()) ==
               std::vector<std::size_t>{32, 64, 96},
           "default windows");
  c.expect(kDefaultConditionWidth == 128, "condition width");
  c.expect(kOctantCount == 8, "octant count");
  std::set<Vec3> styles;
  for (int o = 0; o < kOctantCount; ++o) styles.insert(octant_style_vector(o));
  c.expect(styles.size() == 8 && throws_code(ErrorCode::OctantOutOfRange, [] { octant_style_vector(8); }),
           "octant styles");
  c.expect(kDefaultMelBins == 80 && synthesize_gan_fixture(0, 1).real[0].bins == 80, "mel bins");
  c.note("presets {0.1,0.5,0.9}, windows [32,64,96], C=128, 8 octants, F=80");
  return c.outcome();
}

// ---------------------------------------------------------------------------
// Subprocess helpers

struct Proc {
  bool exited = false;
  int code = -1;
  std::string err;
};

Proc run_cli(const std::vector<std::string>& args, const fs::path& scratch) {
  std::string cmd = std::string("'") + EMOSPHERE_CLI_PATH + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  const fs::path err = scratch / "stderr.txt";
  cmd += " > /dev/null 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Proc p;
  p.exited = status != -1 && WIFEXITED(status);
  p.code = p.exited ? WEXITSTATUS(status) : -1;
  try {
    p.err = read_file(err);
  } catch (const Error&) {
  }
  return p;
}

Outcome ac9() {
  Checks c;
  testing_support::TempDir dir("acceptance_e2e");
  const auto t0 = std::chrono::steady_clock::now();
  std::map<std::string, std::string> first;
  for (int rep = 0; rep < 2; ++rep) {
    const fs::path d = dir / ("run" + std::to_string(rep));
    fs::create_directories(d);
    const std::vector<std::vector<std::string>> steps{
        {"synth", "--seed", "2026", "--per-emotion", "200", "--out", (d / "avd.csv").string()},
        {"fit", (d / "avd.csv").string(), "--out", (d / "model.json").string()},
        {"transform", (d / "avd.csv").string(), "--model", (d / "model.json").string(), "--out",
         (d / "points.jsonl").string()},
        {"stats", (d / "points.jsonl").string(), "--json", "--out", (d / "stats.json").string()},
    };
    for (const auto& s : steps) {
      const auto p = run_cli(s, dir.path());
      c.expect(p.exited && p.code == 0, s[0] + " exited " + std::to_string(p.code) + ": " + p.err);
    }
    for (const char* name : {"avd.csv", "model.json", "points.jsonl", "stats.json"}) {
      std::string bytes;
      try {
        bytes = read_file(d / name);
      } catch (const Error& e) {
        c.expect(false, e.what());
      }
      if (rep == 0) {
        first[name] = bytes;
      } else {
        c.expect(bytes == first[name], std::string(name) + " differs between runs");
      }
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 10.0, "runtime " + fmt(secs) + " s");

  std::string summary;
  try {
    const auto stats = nlohmann::json::parse(first["stats.json"]);
    for (const auto& emo : default_synthetic_emotions()) {
      if (emo.expected_octants.empty()) continue;
      const auto& e = stats.at("emotions").at(emo.label);
      const auto hist = e.at("octants").get<std::vector<double>>();
      double hit = 0.0, total = 0.0;
      for (std::size_t o = 0; o < hist.size(); ++o) {
        total += hist[o];
        for (int x : emo.expected_octants) hit += (static_cast<int>(o) == x) ? hist[o] : 0.0;
      }
      const double frac = total > 0 ? hit / total : 0.0;
      c.expect(frac >= 0.95, emo.label + " only " + fmt(100 * frac) + "% in expected octants");
      summary += " " + emo.label + "=" + fmt(100 * frac) + "%";
    }
  } catch (const std::exception& e) {
    c.expect(false, std::string("stats report unreadable: ") + e.what());
  }
  c.note("octant mass" + summary + "; byte-identical reruns; " + fmt(secs) + " s");
  return c.outcome();
}

// Truncations, byte flips, insertions and splices of valid inputs.
std::vector<std::string> mutate(const std::string& good, Gen& g, int random_variants) {
  std::vector<std::string> out{"", std::string(1, '\0'), "\xff\xfe garbage \x01\x02"};
  for (std::size_t cut : {std::size_t{1}, std::size_t{4}, std::size_t{11}, std::size_t{12}, good.size() / 3,
                          good.size() / 2, good.size() - 1}) {
    if (cut < good.size()) out.push_back(good.substr(0, cut));
  }
  for (int i = 0; i < random_variants; ++i) {
    std::string m = good;
    const int edits = 1 + static_cast<int>(g.index(4));
    for (int e = 0; e < edits && !m.empty(); ++e) {
      const std::size_t pos = g.index(m.size());
      switch (g.index(4)) {
        case 0:
          m[pos] = static_cast<char>(g.u64() & 0xff);
          break;
        case 1:
          m.erase(pos, 1 + g.index(8));
          break;
        case 2:
          m.insert(pos, std::string(1 + g.index(4), static_cast<char>(g.u64() & 0xff)));
          break;
        default:
          m.insert(pos, std::string(",,\"{[]}:nan-1e999\n").substr(g.index(10)));
          break;
      }
    }
    out.push_back(m);
  }
  return out;
}

Outcome ac10() {
  Checks c;
  testing_support::TempDir dir("acceptance_fuzz");
  const fs::path d = dir.path();
  std::set<std::string> names;
  for (int k = 0; k <= static_cast<int>(ErrorCode::InvalidArgument); ++k) {
    names.insert(std::string(error_name(static_cast<ErrorCode>(k))));
  }

  SyntheticConfig cfg;
  cfg.seed = 1;
  cfg.per_emotion = 12;
  const auto ds = synthesize_dataset(cfg);
  const std::string csv = serialize_records(ds, RecordFormat::csv);
  const std::string jsonl = serialize_records(ds, RecordFormat::jsonl);
  write_file(d / "good.csv", csv);
  const auto model = fit(ds, FenceScope::per_emotion);
  write_file(d / "model.json", serialize_model(model));
  std::string points;
  for (const auto& r : ds.records) {
    if (r.emotion == "neutral") continue;
    const auto s = transform(r, model);
    nlohmann::ordered_json row{{"utt_id", r.utt_id}, {"emotion", r.emotion}, {"r", s.r},
                               {"theta", s.theta},   {"phi", s.phi},         {"r_norm", *s.r_norm},
                               {"octant", *s.octant}};
    points += row.dump() + "\n";
  }
  const std::string control = R"({"emotion":"angry","style":{"vector":[1,-1,1]},"intensity":"strong"})";
  const auto fx = synthesize_gan_fixture(3, 2, 8, 100, 5);
  const std::string melf = encode_melf(fx.real[0]);
  const std::string conds = serialize_conditions(fx.conds);
  const std::string disc =
      serialize_discriminator(seed_init_discriminator(4, std::vector<std::size_t>{32, 64, 96}, 8, 5, true));
  fs::create_directories(d / "real");
  fs::create_directories(d / "fake");
  write_melf(d / "fake" / "0.melf", fx.fake[0]);
  write_melf(d / "fake" / "1.melf", fx.fake[1]);
  write_melf(d / "real" / "1.melf", fx.real[1]);
  write_file(d / "conds.json", conds);
  write_file(d / "disc.json", disc);
  write_file(d / "control.json", control);
  const auto enc = seed_init_encoder(5, std::vector<std::string>{"neutral", "angry"}, 4);
  const std::string enc_json = serialize_encoder(enc);
  write_file(d / "enc.json", enc_json);

  struct Target {
    std::string label;
    std::string good;
    fs::path file;
    std::vector<std::string> args;
    int variants;
  };
  const std::string ganreal = (d / "real").string(), ganfake = (d / "fake").string();
  const std::vector<Target> targets{
      {"csv", csv, d / "in.csv", {"fit", (d / "in.csv").string(), "--out", (d / "m.json").string()}, 40},
      {"csv-transform", csv, d / "in2.csv",
       {"transform", (d / "in2.csv").string(), "--model", (d / "model.json").string(), "--out",
        (d / "t.jsonl").string()},
       20},
      {"jsonl", jsonl, d / "in.jsonl", {"fit", (d / "in.jsonl").string(), "--out", (d / "m.json").string()}, 40},
      {"jsonl-lenient", jsonl, d / "in2.jsonl",
       {"fit", (d / "in2.jsonl").string(), "--mode", "lenient", "--out", (d / "m.json").string()}, 20},
      {"model", serialize_model(model), d / "model_bad.json",
       {"transform", (d / "good.csv").string(), "--model", (d / "model_bad.json").string(), "--out",
        (d / "t.jsonl").string()},
       20},
      {"points", points, d / "points.jsonl", {"stats", (d / "points.jsonl").string(), "--json"}, 40},
      {"control", control, d / "control_bad.json",
       {"embed", "--control", (d / "control_bad.json").string(), "--weights", (d / "enc.json").string()}, 30},
      {"encoder", enc_json, d / "enc_bad.json",
       {"embed", "--control", (d / "control.json").string(), "--weights", (d / "enc_bad.json").string()}, 20},
      {"melf", melf, d / "real" / "0.melf",
       {"ganloss", "--real", ganreal, "--fake", ganfake, "--conds", (d / "conds.json").string(), "--ideal-stub"},
       40},
      {"melf-net", melf, d / "real" / "0.melf",
       {"ganloss", "--real", ganreal, "--fake", ganfake, "--conds", (d / "conds.json").string(), "--weights",
        (d / "disc.json").string()},
       10},
      {"conds", conds, d / "conds_bad.json",
       {"ganloss", "--real", ganreal, "--fake", ganfake, "--conds", (d / "conds_bad.json").string(),
        "--ideal-stub"},
       20},
      {"disc", disc, d / "disc_bad.json",
       {"ganloss", "--real", ganreal, "--fake", ganfake, "--conds", (d / "conds.json").string(), "--weights",
        (d / "disc_bad.json").string()},
       15},
  };

  Gen g(10);
  int cases = 0, failures = 0, rejected = 0;
  for (const auto& t : targets) {
    for (const auto& bad : mutate(t.good, g, t.variants)) {
      write_file(t.file, bad);
      const auto p = run_cli(t.args, d);
      ++cases;
      if (!p.exited) {
        c.expect(false, t.label + ": abnormal termination");
        ++failures;
        continue;
      }
      if (p.code == 0) continue;
      ++rejected;
      bool named = false;
      if (p.err.rfind("error: ", 0) == 0) {
        const auto colon = p.err.find(':', 7);
        named = colon != std::string::npos && names.count(p.err.substr(7, colon - 7)) > 0;
      }
      if (!(p.code == 1 || p.code == 2) || !named) {
        ++failures;
        c.expect(false, t.label + ": exit " + std::to_string(p.code) + " stderr '" + p.err.substr(0, 120) + "'");
      }
    }
    write_file(t.file, t.good);
  }
  c.note(std::to_string(cases) + " corrupted inputs, " + std::to_string(rejected) + " rejected with named errors, " +
         std::to_string(failures) + " abnormal");
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 transform worked example", ac1},   {"AC2 spherical round trip", ac2},
      {"AC3 octant sign/angle equivalence", ac3}, {"AC4 IQR fences", ac4},
      {"AC5 encoder", ac5},                    {"AC6 GAN losses", ac6},
      {"AC7 gradient check", ac7},             {"AC8 anchored constants", ac8},
      {"AC9 end-to-end CLI", ac9},             {"AC10 malformed-input robustness", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("unexpected exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
