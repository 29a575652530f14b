#include "emosphere/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
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

namespace emosphere::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kDefaultEmotions{"neutral", "angry", "happy", "sad", "surprise"};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

RecordFormat pick_format(const std::string& flag, const fs::path& path) {
  return flag == "auto" ? format_from_extension(path) : format_from_name(flag);
}

ValidationMode pick_mode(const std::string& flag) {
  return flag == "lenient" ? ValidationMode::lenient : ValidationMode::strict;
}

// Writes to the file when a path is given, otherwise to the stream.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
  } else {
    write_file(path, text);
  }
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::uint64_t seed = 0;
  std::size_t per_emotion = 200;
  std::string format = "auto";
  std::string out;
};

int cmd_synth(const SynthOptions& o, Streams s) {
  SyntheticConfig cfg;
  cfg.seed = o.seed;
  cfg.per_emotion = o.per_emotion;
  const auto ds = synthesize_dataset(cfg);
  write_file(o.out, serialize_records(ds, pick_format(o.format, o.out)));
  s.out << "wrote " << ds.records.size() << " records to " << o.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// fit

struct FitOptions {
  std::string records;
  std::string format = "auto";
  std::string mode = "strict";
  std::string fence_scope = "per_emotion";
  std::string out;
};

int cmd_fit(const FitOptions& o, Streams s) {
  const auto parsed = parse_records(o.records, pick_format(o.format, o.records), pick_mode(o.mode));
  const auto model = fit(parsed.dataset, fence_scope_from_name(o.fence_scope));
  write_file(o.out, serialize_model(model));

  std::map<std::string, std::size_t> counts;
  for (const auto& r : parsed.dataset.records) ++counts[r.emotion];
  s.out << "records: " << parsed.dataset.records.size() << '\n';
  if (parsed.clamped_values > 0) {
    s.out << "warning: clamped " << parsed.clamped_values << " values in " << parsed.clamped_records
          << " records to [" << kEnvelopeLo << ", " << kEnvelopeHi << "]\n";
  }
  s.out << "center: [" << format_double(model.center.m[0]) << ", " << format_double(model.center.m[1]) << ", "
        << format_double(model.center.m[2]) << "]\n";
  for (const auto& [label, n] : counts) s.out << "  " << label << ": " << n << " records\n";
  s.out << "fences (" << fence_scope_name(model.fence_scope) << "):\n";
  for (const auto& [label, f] : model.fences) {
    s.out << "  " << label << ": lo=" << format_double(f.lo) << " hi=" << format_double(f.hi) << '\n';
  }
  s.out << "model written to " << o.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// transform

struct TransformOptions {
  std::string records;
  std::string model;
  std::string format = "auto";
  std::string mode = "strict";
  std::string out;
};

int cmd_transform(const TransformOptions& o, Streams s) {
  const auto model = parse_model(read_file(o.model));
  const auto parsed = parse_records(o.records, pick_format(o.format, o.records), pick_mode(o.mode));
  std::string rows;
  std::size_t degenerate = 0;
  std::array<std::size_t, kOctantCount> octants{};
  for (const auto& rec : parsed.dataset.records) {
    model.fences_for(rec.emotion);  // UnknownEmotion aborts the whole command
    ordered_json row;
    row["utt_id"] = rec.utt_id;
    row["speaker_id"] = rec.speaker_id;
    row["emotion"] = rec.emotion;
    try {
      const auto sp = transform(rec, model);
      row["r"] = sp.r;
      row["theta"] = sp.theta;
      row["phi"] = sp.phi;
      row["r_norm"] = *sp.r_norm;
      row["octant"] = *sp.octant;
      ++octants[static_cast<std::size_t>(*sp.octant)];
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRadius) throw;
      const auto p = center(coordinates(rec), model.center);
      row["r"] = std::sqrt(p.da * p.da + p.dv * p.dv + p.dd * p.dd);
      row["degenerate"] = true;
      ++degenerate;
    }
    rows += row.dump() + '\n';
  }
  write_file(o.out, rows);
  s.out << "transformed " << parsed.dataset.records.size() << " records (" << degenerate << " degenerate) to " << o.out
        << '\n';
  s.out << "octant counts:";
  for (auto n : octants) s.out << ' ' << n;
  s.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// stats

struct StatsOptions {
  std::string transformed;
  bool json = false;
  std::string out;
};

struct EmotionStats {
  std::size_t count = 0;
  std::size_t degenerate = 0;
  std::array<std::size_t, kOctantCount> octants{};
  std::vector<double> intensities;
};

int cmd_stats(const StatsOptions& o, Streams s) {
  const auto text = read_file(o.transformed);
  std::map<std::string, EmotionStats> by_emotion;
  std::size_t total = 0, degenerate = 0, line_no = 0;
  std::istringstream lines(text);
  std::string line;
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(lines, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) throw bad("not a JSON object");
    if (!row.contains("emotion") || !row["emotion"].is_string()) throw bad("missing string 'emotion'");
    auto& st = by_emotion[row["emotion"].get<std::string>()];
    ++st.count;
    ++total;
    if (row.contains("degenerate") && row["degenerate"].is_boolean() && row["degenerate"].get<bool>()) {
      ++st.degenerate;
      ++degenerate;
      continue;
    }
    if (!row.contains("octant") || !row["octant"].is_number_integer()) throw bad("missing integer 'octant'");
    const auto octant = row["octant"].get<long long>();
    if (octant < 0 || octant >= kOctantCount) throw bad("octant out of range");
    if (!row.contains("r_norm") || !row["r_norm"].is_number()) throw bad("missing numeric 'r_norm'");
    const double r_norm = row["r_norm"].get<double>();
    if (!(r_norm >= 0.0 && r_norm <= 1.0)) throw bad("r_norm outside [0, 1]");
    ++st.octants[static_cast<std::size_t>(octant)];
    st.intensities.push_back(r_norm);
  }
  if (total == 0) throw Error(ErrorCode::EmptyDataset, o.transformed + " has no rows");

  ordered_json report;
  report["total"] = total;
  report["degenerate"] = degenerate;
  ordered_json emotions = ordered_json::object();
  std::ostringstream txt;
  txt << "rows: " << total << " (" << degenerate << " degenerate)\n";
  for (auto& [label, st] : by_emotion) {
    ordered_json e;
    e["count"] = st.count;
    e["degenerate"] = st.degenerate;
    e["octants"] = st.octants;
    txt << label << ": n=" << st.count << " degenerate=" << st.degenerate << "\n  octants:";
    for (auto n : st.octants) txt << ' ' << n;
    txt << '\n';
    if (st.intensities.empty()) {
      e["intensity_quartiles"] = nullptr;
      txt << "  intensity quartiles: n/a\n";
    } else {
      std::sort(st.intensities.begin(), st.intensities.end());
      const double q1 = quantile_sorted(st.intensities, 0.25);
      const double q2 = quantile_sorted(st.intensities, 0.5);
      const double q3 = quantile_sorted(st.intensities, 0.75);
      e["intensity_quartiles"] = {q1, q2, q3};
      txt << "  intensity quartiles: " << format_double(q1) << ' ' << format_double(q2) << ' ' << format_double(q3)
          << '\n';
    }
    emotions[label] = std::move(e);
  }
  report["emotions"] = std::move(emotions);
  emit(o.out, o.json ? report.dump(2) + '\n' : txt.str(), s.out);
  return 0;
}

// ---------------------------------------------------------------------------
// init-weights / embed

struct WeightsOptions {
  std::uint64_t seed = 42;
  std::size_t width = kDefaultBranchWidth;
  std::vector<std::string> emotions = kDefaultEmotions;
  std::string out;
};

int cmd_init_weights(const WeightsOptions& o, Streams s) {
  const auto w = seed_init_encoder(o.seed, o.emotions, o.width);
  write_file(o.out, serialize_encoder(w));
  s.out << "encoder weights P=" << w.branch_width << " H=" << w.output_width() << " emotions=" << w.emotion_index.size()
        << " written to " << o.out << '\n';
  return 0;
}

struct EmbedOptions {
  std::string control;
  std::string transformed;
  std::string utt;
  std::string weights;
  std::uint64_t seed_init = 42;
  std::size_t width = kDefaultBranchWidth;
  std::vector<std::string> emotions = kDefaultEmotions;
  std::string out;
};

ControlSpec control_from_transformed(const std::string& path, const std::string& utt) {
  std::istringstream lines(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto row = nlohmann::json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() || !row.contains("utt_id") || !row["utt_id"].is_string()) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": not a transformed row");
    }
    if (row["utt_id"].get<std::string>() != utt) continue;
    if (row.value("degenerate", false)) throw Error(ErrorCode::DegenerateRadius, utt + " has no defined style");
    if (!row.contains("emotion") || !row["emotion"].is_string() || !row.contains("octant") ||
        !row["octant"].is_number_integer() || !row.contains("r_norm") || !row["r_norm"].is_number()) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": incomplete transformed row");
    }
    const auto octant = row["octant"].get<long long>();
    if (octant < 0 || octant >= kOctantCount) throw Error(ErrorCode::OctantOutOfRange, std::to_string(octant));
    return ControlSpec{row["emotion"].get<std::string>(), OctantStyle{static_cast<int>(octant)},
                       row["r_norm"].get<double>()};
  }
  throw Error(ErrorCode::InvalidArgument, "utt_id '" + utt + "' not found in " + path);
}

int cmd_embed(const EmbedOptions& o, Streams s) {
  if (o.control.empty() == o.transformed.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give exactly one of --control or --transformed");
  }
  if (!o.transformed.empty() && o.utt.empty()) throw Error(ErrorCode::InvalidArgument, "--transformed needs --utt");
  const ControlSpec spec =
      o.control.empty() ? control_from_transformed(o.transformed, o.utt) : parse_control(read_file(o.control));
  const EncoderWeights w =
      o.weights.empty() ? seed_init_encoder(o.seed_init, o.emotions, o.width) : parse_encoder(read_file(o.weights));
  const auto result = build_control(spec, w);
  ordered_json j;
  j["emotion"] = spec.emotion;
  j["style"] = result.style;
  j["intensity"] = result.intensity;
  j["embedding"] = result.embedding.values;
  emit(o.out, j.dump() + '\n', s.out);
  if (!o.out.empty()) s.out << "embedding (H=" << result.embedding.values.size() << ") written to " << o.out << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// init-disc / make-gan-fixtures / ganloss / gradcheck

struct DiscOptions {
  std::uint64_t seed = 0;
  std::vector<std::size_t> windows{kDefaultWindows.begin(), kDefaultWindows.end()};
  std::size_t bins = kDefaultMelBins;
  std::size_t cond_dim = kDefaultConditionWidth;
  std::string uncond = "on";
  std::string out;
};

int cmd_init_disc(const DiscOptions& o, Streams s) {
  const auto w = seed_init_discriminator(o.seed, o.windows, o.bins, o.cond_dim, o.uncond == "on");
  write_file(o.out, serialize_discriminator(w));
  s.out << w.stacks.size() << " stacks, " << parameter_count(w) << " parameters written to " << o.out << '\n';
  return 0;
}

struct FixtureOptions {
  std::uint64_t seed = 0;
  std::size_t count = 4;
  std::size_t bins = kDefaultMelBins;
  std::size_t frames = 128;
  std::size_t cond_dim = kDefaultConditionWidth;
  std::string out_dir;
};

int cmd_make_fixtures(const FixtureOptions& o, Streams s) {
  const auto fx = synthesize_gan_fixture(o.seed, o.count, o.bins, o.frames, o.cond_dim);
  const fs::path root(o.out_dir);
  std::error_code ec;
  fs::create_directories(root / "real", ec);
  fs::create_directories(root / "fake", ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create " + root.string());
  for (std::size_t b = 0; b < fx.real.size(); ++b) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.melf", b);
    write_melf(root / "real" / name, fx.real[b]);
    write_melf(root / "fake" / name, fx.fake[b]);
  }
  write_file(root / "conds.json", serialize_conditions(fx.conds));
  s.out << "wrote " << fx.real.size() << " real/fake pairs and conds.json to " << root.string() << '\n';
  return 0;
}

struct GanLossOptions {
  std::string real_dir;
  std::string fake_dir;
  std::string conds;
  std::string weights;
  std::uint64_t seed = 0;
  std::vector<std::size_t> windows{kDefaultWindows.begin(), kDefaultWindows.end()};
  std::string uncond = "on";
  bool ideal_stub = false;
  bool json = false;
  std::string out;
};

std::vector<Mel> load_mels(const std::vector<fs::path>& files, std::size_t max_window) {
  std::vector<Mel> mels;
  for (const auto& f : files) {
    Mel m = read_melf(f);
    if (m.frames < max_window) {
      throw Error(ErrorCode::WindowTooLong, f.string() + ": window " + std::to_string(max_window) + " exceeds " +
                                                std::to_string(m.frames) + " frames");
    }
    mels.push_back(std::move(m));
  }
  return mels;
}

ordered_json losses_json(const GanLosses& losses, const GanBatch& batch, std::uint64_t seed) {
  ordered_json j;
  j["loss_d"] = losses.loss_d;
  j["loss_g"] = losses.loss_g;
  j["seed"] = seed;
  j["windows"] = batch.windows;
  j["uncond_stack"] = batch.uncond_stack;
  j["starts"] = batch.starts;
  ordered_json terms = ordered_json::array();
  for (const auto& t : losses.terms) {
    terms.push_back({{"loss", t.loss == LossKind::discriminator ? "d" : "g"},
                     {"window", t.window},
                     {"kind", cond_kind_name(t.kind)},
                     {"side", t.side == Side::real ? "real" : "fake"},
                     {"value", t.value}});
  }
  j["terms"] = std::move(terms);
  return j;
}

int cmd_ganloss(const GanLossOptions& o, Streams s) {
  if (o.real_dir.empty() || o.fake_dir.empty() || o.conds.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--real, --fake and --conds are required");
  }
  if (o.weights.empty() && !o.ideal_stub) throw Error(ErrorCode::InvalidArgument, "--weights is required without --ideal-stub");
  if (o.windows.empty()) throw Error(ErrorCode::InvalidArgument, "--windows must list at least one window");
  const std::size_t max_window = *std::max_element(o.windows.begin(), o.windows.end());

  GanBatch batch;
  const auto real_files = list_melf(o.real_dir);
  const auto fake_files = list_melf(o.fake_dir);
  if (real_files.size() != fake_files.size()) {
    throw Error(ErrorCode::BatchMismatch, std::to_string(real_files.size()) + " real vs " +
                                              std::to_string(fake_files.size()) + " generated mel files");
  }
  if (real_files.empty()) throw Error(ErrorCode::EmptyDataset, "no .melf files in " + o.real_dir);
  batch.real = load_mels(real_files, max_window);
  batch.fake = load_mels(fake_files, max_window);
  batch.conds = parse_conditions(read_file(o.conds));
  if (batch.conds.size() != batch.real.size()) {
    throw Error(ErrorCode::BatchMismatch, std::to_string(batch.conds.size()) + " condition sets for " +
                                              std::to_string(batch.real.size()) + " samples");
  }
  batch.windows = o.windows;
  batch.uncond_stack = o.uncond == "on";
  batch.starts = draw_clip_starts(o.seed, batch.real, batch.fake, batch.windows);

  GanLosses losses;
  if (o.ideal_stub) {
    losses = gan_losses(batch, constant_scorer(1.0, 0.0));
  } else {
    const auto w = parse_discriminator(read_file(o.weights));
    losses = gan_losses(batch, w);
  }
  const auto j = losses_json(losses, batch, o.seed);
  if (!o.out.empty()) write_file(o.out, j.dump(2) + '\n');
  if (o.json) {
    s.out << j.dump(2) << '\n';
  } else {
    s.out << "loss_d " << format_double(losses.loss_d) << '\n' << "loss_g " << format_double(losses.loss_g) << '\n';
    for (const auto& t : losses.terms) {
      s.out << "  " << (t.loss == LossKind::discriminator ? "D" : "G") << " t=" << t.window << ' '
            << cond_kind_name(t.kind) << ' ' << (t.side == Side::real ? "real" : "fake") << ' '
            << format_double(t.value) << '\n';
    }
  }
  return 0;
}

struct GradCheckOptions {
  std::uint64_t seed = 0;
  std::size_t seeds = 3;
  double step = 1e-5;
  double threshold = 1e-3;
  std::string uncond = "on";
  bool json = false;
};

int cmd_gradcheck(const GradCheckOptions& o, Streams s) {
  GradCheckConfig cfg;
  cfg.step = o.step;
  cfg.threshold = o.threshold;
  ordered_json reports = ordered_json::array();
  double worst = 0.0;
  bool all_passed = true;
  std::ostringstream txt;
  for (std::size_t i = 0; i < o.seeds; ++i) {
    const std::uint64_t seed = o.seed + i;
    const auto fx = tiny_gradcheck_fixture(seed, o.uncond == "on");
    const auto r = check_gradients(fx.batch, fx.weights, cfg);
    worst = std::max(worst, r.max_rel_err());
    all_passed = all_passed && r.passed;
    reports.push_back({{"seed", seed},
                       {"params_checked", r.params_checked},
                       {"inputs_checked", r.inputs_checked},
                       {"max_rel_err_params", r.max_rel_err_params},
                       {"max_rel_err_fake_input", r.max_rel_err_fake_input},
                       {"pass", r.passed}});
    txt << "seed " << seed << ": " << r.params_checked << " params, " << r.inputs_checked
        << " mel entries, max rel err " << format_double(r.max_rel_err()) << (r.passed ? " PASS" : " FAIL") << '\n';
  }
  txt << (all_passed ? "PASS" : "FAIL") << ": max relative error " << format_double(worst) << " (threshold "
      << format_double(o.threshold) << ")\n";
  if (o.json) {
    ordered_json j;
    j["reports"] = std::move(reports);
    j["max_rel_err"] = worst;
    j["threshold"] = o.threshold;
    j["pass"] = all_passed;
    s.out << j.dump(2) << '\n';
  } else {
    s.out << txt.str();
  }
  return all_passed ? 0 : 2;
}

// Runs a command body, translating library errors into exit codes.
int guarded(const std::function<int()>& body, Streams s) {
  try {
    return body();
  } catch (const Error& e) {
    s.err << "error: " << e.name() << ": " << e.detail() << '\n';
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    s.err << "error: MalformedFile: " << e.what() << '\n';
    return 2;
  } catch (const std::bad_alloc&) {
    s.err << "error: IoFailure: out of memory\n";
    return 1;
  } catch (const std::exception& e) {
    s.err << "error: IoFailure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Streams s{out, err};
  CLI::App app{"Spherical emotion conditioning toolkit: AVD pseudo-labels to emotion vectors, embeddings and "
               "conditional adversarial losses",
               "emosphere"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(36);
  std::function<int()> action;

  const std::vector<std::string> formats{"auto", "csv", "jsonl"};
  const std::vector<std::string> modes{"strict", "lenient"};
  const std::vector<std::string> scopes{"per_emotion", "global"};
  const std::vector<std::string> on_off{"on", "off"};

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic 5-emotion AVD dataset with known geometry");
  synth_cmd->add_option("--seed", synth.seed, "PRNG seed")->capture_default_str();
  synth_cmd->add_option("--per-emotion", synth.per_emotion, "Records per emotion")->capture_default_str();
  synth_cmd->add_option("--format", synth.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output records file")->required();
  synth_cmd->callback([&] { action = [&] { return cmd_synth(synth, s); }; });

  FitOptions fit_o;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the neutral center and intensity fences");
  fit_cmd->add_option("records", fit_o.records, "AVD records (CSV or JSONL)")->required();
  fit_cmd->add_option("--format", fit_o.format, "Record format")->check(CLI::IsMember(formats))->capture_default_str();
  fit_cmd->add_option("--mode", fit_o.mode, "Range validation")->check(CLI::IsMember(modes))->capture_default_str();
  fit_cmd->add_option("--fence-scope", fit_o.fence_scope, "Intensity normalization scope")
      ->check(CLI::IsMember(scopes))
      ->capture_default_str();
  fit_cmd->add_option("--out", fit_o.out, "Output sphere model JSON")->required();
  fit_cmd->callback([&] { action = [&] { return cmd_fit(fit_o, s); }; });

  TransformOptions tr;
  auto* tr_cmd = app.add_subcommand("transform", "Map records to spherical emotion vectors (JSONL)");
  tr_cmd->add_option("records", tr.records, "AVD records (CSV or JSONL)")->required();
  tr_cmd->add_option("--model", tr.model, "Sphere model JSON from `fit`")->required();
  tr_cmd->add_option("--format", tr.format, "Record format")->check(CLI::IsMember(formats))->capture_default_str();
  tr_cmd->add_option("--mode", tr.mode, "Range validation")->check(CLI::IsMember(modes))->capture_default_str();
  tr_cmd->add_option("--out", tr.out, "Output JSONL")->required();
  tr_cmd->callback([&] { action = [&] { return cmd_transform(tr, s); }; });

  StatsOptions st;
  auto* st_cmd = app.add_subcommand("stats", "Octant histograms and intensity quartiles of transformed rows");
  st_cmd->add_option("transformed", st.transformed, "JSONL from `transform`")->required();
  st_cmd->add_flag("--json", st.json, "Emit JSON instead of text");
  st_cmd->add_option("--out", st.out, "Write the report here instead of standard output");
  st_cmd->callback([&] { action = [&] { return cmd_stats(st, s); }; });

  WeightsOptions wo;
  auto* w_cmd = app.add_subcommand("init-weights", "Write seed-initialized encoder weights");
  w_cmd->add_option("--seed", wo.seed, "PRNG seed")->capture_default_str();
  w_cmd->add_option("--width", wo.width, "Branch width P (output width is 2P)")->capture_default_str();
  w_cmd->add_option("--emotions", wo.emotions, "Emotion labels, in class-table row order")
      ->delimiter(',')
      ->capture_default_str();
  w_cmd->add_option("--out", wo.out, "Output weights JSON")->required();
  w_cmd->callback([&] { action = [&] { return cmd_init_weights(wo, s); }; });

  EmbedOptions eo;
  auto* e_cmd = app.add_subcommand("embed", "Compute a spherical emotion embedding");
  e_cmd->add_option("--control", eo.control, "Control spec JSON");
  e_cmd->add_option("--transformed", eo.transformed, "Transformed JSONL to take a row from");
  e_cmd->add_option("--utt", eo.utt, "utt_id of the row to embed (with --transformed)");
  e_cmd->add_option("--weights", eo.weights, "Encoder weights JSON (default: seed-initialized)");
  e_cmd->add_option("--seed-init", eo.seed_init, "Seed for initialized weights when --weights is absent")
      ->capture_default_str();
  e_cmd->add_option("--width", eo.width, "Branch width P for seed-initialized weights")->capture_default_str();
  e_cmd->add_option("--emotions", eo.emotions, "Emotion labels for seed-initialized weights")
      ->delimiter(',')
      ->capture_default_str();
  e_cmd->add_option("--out", eo.out, "Output embedding JSON (default: standard output)");
  e_cmd->callback([&] { action = [&] { return cmd_embed(eo, s); }; });

  DiscOptions dop;
  auto* d_cmd = app.add_subcommand("init-disc", "Write seed-initialized discriminator stacks");
  d_cmd->add_option("--seed", dop.seed, "PRNG seed")->capture_default_str();
  d_cmd->add_option("--windows", dop.windows, "Clip window lengths in frames")->delimiter(',')->capture_default_str();
  d_cmd->add_option("--bins", dop.bins, "Mel bins F")->capture_default_str();
  d_cmd->add_option("--cond-dim", dop.cond_dim, "Condition embedding width C")->capture_default_str();
  d_cmd->add_option("--uncond-stack", dop.uncond, "Include the unconditional stack")
      ->check(CLI::IsMember(on_off))
      ->capture_default_str();
  d_cmd->add_option("--out", dop.out, "Output weights JSON")->required();
  d_cmd->callback([&] { action = [&] { return cmd_init_disc(dop, s); }; });

  FixtureOptions fo;
  auto* f_cmd = app.add_subcommand("make-gan-fixtures", "Write seeded real/generated MELF files and conditions");
  f_cmd->add_option("--seed", fo.seed, "PRNG seed")->capture_default_str();
  f_cmd->add_option("--count", fo.count, "Number of real/generated pairs")->capture_default_str();
  f_cmd->add_option("--bins", fo.bins, "Mel bins F")->capture_default_str();
  f_cmd->add_option("--frames", fo.frames, "Frames T per mel")->capture_default_str();
  f_cmd->add_option("--cond-dim", fo.cond_dim, "Condition embedding width C")->capture_default_str();
  f_cmd->add_option("--out-dir", fo.out_dir, "Directory to create real/, fake/ and conds.json in")->required();
  f_cmd->callback([&] { action = [&] { return cmd_make_fixtures(fo, s); }; });

  GanLossOptions go;
  auto* g_cmd = app.add_subcommand("ganloss", "Dual conditional least-squares adversarial losses");
  g_cmd->add_option("--real", go.real_dir, "Directory of ground-truth .melf files");
  g_cmd->add_option("--fake", go.fake_dir, "Directory of generated .melf files (paired by sorted name)");
  g_cmd->add_option("--conds", go.conds, "Per-sample speaker/emotion condition JSON");
  g_cmd->add_option("--weights", go.weights, "Discriminator weights JSON");
  g_cmd->add_option("--seed", go.seed, "Seed for clip offsets")->capture_default_str();
  g_cmd->add_option("--windows", go.windows, "Clip window lengths in frames")->delimiter(',')->capture_default_str();
  g_cmd->add_option("--uncond-stack", go.uncond, "Add the unconditional stack to the sums")
      ->check(CLI::IsMember(on_off))
      ->capture_default_str();
  g_cmd->add_flag("--ideal-stub", go.ideal_stub, "Replace D with constants: 1 on real clips, 0 on generated");
  g_cmd->add_flag("--json", go.json, "Print JSON instead of text");
  g_cmd->add_option("--out", go.out, "Also write the JSON report here");
  g_cmd->callback([&] {
    if (!action) action = [&] { return cmd_ganloss(go, s); };
  });

  GradCheckOptions gc;
  auto* gc_cmd = g_cmd->add_subcommand("gradcheck", "Check analytic gradients against central finite differences");
  gc_cmd->add_option("--seed", gc.seed, "First fixture seed")->capture_default_str();
  gc_cmd->add_option("--seeds", gc.seeds, "Number of consecutive seeds")->capture_default_str();
  gc_cmd->add_option("--step", gc.step, "Finite-difference step")->capture_default_str();
  gc_cmd->add_option("--threshold", gc.threshold, "Maximum relative error to pass")->capture_default_str();
  gc_cmd->add_option("--uncond-stack", gc.uncond, "Include the unconditional stack")
      ->check(CLI::IsMember(on_off))
      ->capture_default_str();
  gc_cmd->add_flag("--json", gc.json, "Print JSON instead of text");
  gc_cmd->callback([&] { action = [&] { return cmd_gradcheck(gc, s); }; });

  std::vector<std::string> argv_store{"emosphere"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (!action) {
    err << "error: InvalidArgument: no command given\n";
    return 2;
  }
  return guarded(action, s);
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace emosphere::cli
