/**
 * @file cli.hpp
 *
 * The commands behind the `fieldvision` executable, callable in-process.
 * Each returns a process exit code:
 *
 *   0  success
 *   2  invalid configuration (config document, rules, stage switches, preset)
 *   3  invalid stream or input file (manifest, frames, detections, truth, reports)
 *   4  runtime failure
 */

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fieldvision/bench/config.hpp"
#include "fieldvision/bench/records.hpp"
#include "fieldvision/bench/report.hpp"
#include "fieldvision/bench/score.hpp"
#include "fieldvision/platform/control_wrapper.hpp"
#include "fieldvision/platform/data_wrapper.hpp"
#include "fieldvision/platform/lut_file.hpp"
#include "fieldvision/synthgen/emit.hpp"
#include "fieldvision/synthgen/presets.hpp"

namespace fv::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStream = 3;
inline constexpr int kExitRuntime = 4;

inline constexpr const char* kDetectionsName = "detections.jsonl";
inline constexpr const char* kFrameLogName = "frames.jsonl";
inline constexpr const char* kBenchJsonName = "bench.json";
inline constexpr const char* kBenchTextName = "bench.txt";

namespace detail {

inline bool write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

inline bool make_dir(const fs::path& dir, std::ostream& err) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    err << "error: cannot create output directory " << dir.string() << '\n';
    return false;
  }
  return true;
}

/// Config from file (or defaults), with the seed override applied.
inline std::optional<bench::PipelineConfig> load_config(const std::optional<fs::path>& path,
                                                        std::optional<std::uint64_t> seed, std::ostream& err) {
  try {
    bench::PipelineConfig c = path ? bench::read_config_file(*path) : bench::PipelineConfig{};
    if (seed) c.seed = *seed;
    return c;
  } catch (const bench::ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return std::nullopt;
  }
}

inline std::optional<std::shared_ptr<const ColourLUT>> load_lut(const bench::PipelineConfig& c, std::ostream& err) {
  if (!c.lut_path) return default_lut();
  try {
    return std::make_shared<const ColourLUT>(platform::read_lut_file(*c.lut_path));
  } catch (const std::exception& e) {
    err << "error: config: field 'lut': " << e.what() << '\n';
    return std::nullopt;
  }
}

inline bool is_stream_error(const std::exception& e) {
  return dynamic_cast<const platform::StreamError*>(&e) || dynamic_cast<const platform::FrameReadError*>(&e) ||
         dynamic_cast<const platform::FrameFormatError*>(&e);
}

}  // namespace detail

// gen -------------------------------------------------------------------------

struct GenOptions {
  std::string source;  // preset name, "all", or a scene file path
  fs::path output;
  std::optional<std::size_t> frames;  // presets only; default is the preset's own count
  std::uint64_t seed = 1;
  bool clean = false;  // presets only: no per-pixel noise
};

inline int cli_gen(const GenOptions& o, std::ostream& out, std::ostream& err) {
  try {
    auto emit_one = [&](const synth::PresetProfile& p, const fs::path& dir) {
      const std::size_t n = o.frames.value_or(p.default_frames);
      synth::emit_preset(p.name, n, dir, {o.seed, o.clean});
      out << "wrote " << n << " frames of " << p.name << " to " << dir.string() << '\n';
    };
    if (o.source == "all") {
      for (const auto& p : synth::kPresets) emit_one(p, o.output / std::string(p.name));
      return kExitOk;
    }
    if (const auto* p = synth::find_preset(o.source)) {
      emit_one(*p, o.output);
      return kExitOk;
    }
    if (!fs::is_regular_file(o.source)) {
      err << "error: '" << o.source << "' is neither a preset (";
      for (const auto& n : synth::preset_names()) err << ' ' << n;
      err << " ) nor a scene file\n";
      return kExitConfig;
    }
    synth::SceneSequence seq;
    try {
      std::ifstream in(o.source);
      seq = synth::sequence_from_json(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      err << "error: " << o.source << ": " << e.what() << '\n';
      return kExitConfig;
    }
    synth::emit_stream(seq.scenes, o.output, seq.name, seq.fps);
    out << "wrote " << seq.scenes.size() << " frames of " << seq.name << " to " << o.output.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

// build-lut -------------------------------------------------------------------

struct BuildLutOptions {
  std::optional<fs::path> rules;  // default field rules when absent
  fs::path output;
};

inline int cli_build_lut(const BuildLutOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<ColourRule> rules;
  try {
    rules = o.rules ? platform::read_rules_file(*o.rules) : default_field_rules();
    validate_rules(rules);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    platform::write_lut_file(o.output, build_lut(rules));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  out << "wrote " << kLutEntries << "-entry table from " << rules.size() << " rules to " << o.output.string() << '\n';
  return kExitOk;
}

// run -------------------------------------------------------------------------

struct RunOptions {
  fs::path stream;
  std::optional<fs::path> config;
  fs::path output;  // directory receiving detections.jsonl and frames.jsonl
  std::optional<std::uint64_t> seed;
  platform::BackendKind backend = platform::BackendKind::Kinematic;
  std::vector<std::string> disable;  // stage identifiers switched off
};

inline int cli_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  const auto config = detail::load_config(o.config, o.seed, err);
  if (!config) return kExitConfig;
  const auto lut = detail::load_lut(*config, err);
  if (!lut) return kExitConfig;

  std::unique_ptr<platform::ReplayBackend> backend;
  try {
    backend = platform::open_replay(o.backend, o.stream, *lut);
  } catch (const std::exception& e) {
    err << "error: stream: " << e.what() << '\n';
    return kExitStream;
  }

  std::optional<platform::ControlWrapper> control;
  try {
    control.emplace(*backend, config->resolved_params(), config->plan);
    for (const auto& s : o.disable) control->set_stage_enabled(s, false);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  if (!detail::make_dir(o.output, err)) return kExitRuntime;
  std::ofstream detections(o.output / kDetectionsName, std::ios::binary);
  std::ofstream frames(o.output / kFrameLogName, std::ios::binary);
  const std::string name = backend->info().manifest.name;
  std::size_t completed = 0;
  try {
    while (auto report = control->run_frame()) {
      detections << bench::detections_to_json(*report).dump() << '\n';
      frames << bench::frame_report_to_json(*report, name, 0).dump() << '\n';
      ++completed;
    }
  } catch (const std::exception& e) {
    err << "error: aborted after " << completed << " frames: " << e.what() << '\n';
    return detail::is_stream_error(e) ? kExitStream : kExitRuntime;
  }
  if (!detections || !frames) {
    err << "error: failed writing results to " << o.output.string() << '\n';
    return kExitRuntime;
  }
  out << "processed " << completed << " frames of " << name << " into " << o.output.string() << '\n';
  return kExitOk;
}

// bench -----------------------------------------------------------------------

struct BenchOptions {
  std::vector<fs::path> streams;
  std::optional<fs::path> config;
  fs::path output;  // directory receiving bench.json, bench.txt and frames.jsonl
  std::optional<std::uint64_t> seed;
  int repetitions = 1;
  platform::BackendKind backend = platform::BackendKind::Kinematic;
};

/// Every stream is loaded into memory first so that file I/O stays out of the
/// timings. Each stream gets one untimed warm-up pass, then `repetitions`
/// timed passes on a single thread.
inline int cli_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  if (o.streams.empty()) {
    err << "error: bench needs at least one stream\n";
    return kExitConfig;
  }
  if (o.repetitions < 1) {
    err << "error: repetitions must be >= 1\n";
    return kExitConfig;
  }
  const auto config = detail::load_config(o.config, o.seed, err);
  if (!config) return kExitConfig;
  const auto lut = detail::load_lut(*config, err);
  if (!lut) return kExitConfig;
  const ValidatedPlan plan = validate_plan(config->plan);
  const PipelineParams params = config->resolved_params();

  struct Loaded {
    std::string name;
    std::vector<FrameInput> inputs;
  };
  std::vector<Loaded> loaded;
  std::vector<std::string> order;
  try {
    for (const auto& path : o.streams) {
      auto backend = platform::open_replay(o.backend, path, *lut);
      Loaded l;
      l.name = backend->info().manifest.name;
      for (int k = 2; std::find(order.begin(), order.end(), l.name) != order.end(); ++k)
        l.name = backend->info().manifest.name + "#" + std::to_string(k);
      while (auto in = backend->next()) l.inputs.push_back(std::move(*in));
      order.push_back(l.name);
      loaded.push_back(std::move(l));
    }
  } catch (const std::exception& e) {
    err << "error: stream: " << e.what() << '\n';
    return kExitStream;
  }

  if (!detail::make_dir(o.output, err)) return kExitRuntime;
  std::ofstream log_file(o.output / kFrameLogName, std::ios::binary);
  std::vector<bench::FrameLogEntry> log;
  try {
    for (const Loaded& l : loaded) {
      VisionBlackboard bb(*lut);
      for (const FrameInput& in : l.inputs) run_frame(plan, bb, params, in.frame, in.kinematics);
      for (int rep = 0; rep < o.repetitions; ++rep) {
        for (const FrameInput& in : l.inputs) {
          const FrameReport r = run_frame(plan, bb, params, in.frame, in.kinematics);
          const auto j = bench::frame_report_to_json(r, l.name, rep);
          log_file << j.dump() << '\n';
          bench::FrameLogEntry e;
          e.stream = l.name;
          e.rep = rep;
          e.seq = r.sequence_index;
          e.total_ns = r.total_ns;
          e.stage_ns = r.duration_ns;
          log.push_back(std::move(e));
        }
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  const bench::BenchReport report =
      bench::build_report(log, order, bench::config_fingerprint(*config),
                          config->plan.mode == ControllerMode::Rigid ? "rigid" : "selective", o.repetitions);
  const std::string table = bench::report_table(report);
  if (!log_file || !detail::write_text(o.output / kBenchJsonName, bench::report_to_json(report).dump(2) + "\n") ||
      !detail::write_text(o.output / kBenchTextName, table)) {
    err << "error: failed writing bench results to " << o.output.string() << '\n';
    return kExitRuntime;
  }
  out << table;
  return kExitOk;
}

// score -----------------------------------------------------------------------

struct ScoreOptions {
  fs::path detections;
  fs::path truth;
  bench::ScoreTolerances tolerances;
  std::optional<fs::path> output;  // score JSON
};

inline int cli_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  bench::ScoreReport report;
  try {
    report = bench::score(bench::read_detections(o.detections), synth::read_truth(o.truth), o.tolerances);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitStream;
  }
  out << bench::score_table(report);
  if (o.output && !detail::write_text(*o.output, bench::score_to_json(report).dump(2) + "\n")) {
    err << "error: cannot write " << o.output->string() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

// compare ---------------------------------------------------------------------

struct CompareOptions {
  fs::path a;
  fs::path b;
  std::optional<fs::path> output;
};

inline int cli_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  std::vector<bench::CompareRow> rows;
  try {
    auto load = [](const fs::path& p) {
      std::ifstream in(p);
      if (!in) throw bench::RecordError("cannot open " + p.string());
      return bench::report_from_json(nlohmann::json::parse(in));
    };
    rows = bench::compare_reports(load(o.a), load(o.b));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitStream;
  }
  out << bench::compare_table(rows);
  if (o.output && !detail::write_text(*o.output, bench::compare_to_json(rows).dump(2) + "\n")) {
    err << "error: cannot write " << o.output->string() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace fv::cli
