// fieldvision: generate streams, build colour tables, run the pipeline,
// benchmark it, and score or compare the results.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fieldvision/bench/cli.hpp"

namespace {

fv::platform::BackendKind parse_backend(const std::string& s) {
  return s == "headless" ? fv::platform::BackendKind::Headless : fv::platform::BackendKind::Kinematic;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Colour-vision pipeline for field-sport robot scenes"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  std::string output;
  app.add_option("--config", config_path, "Pipeline config document (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for generation and RANSAC");
  app.add_option("-o,--output", output, "Output path");

  auto opt_config = [&]() -> std::optional<std::filesystem::path> {
    if (config_path.empty()) return std::nullopt;
    return std::filesystem::path(config_path);
  };
  auto opt_seed = [&]() -> std::optional<std::uint64_t> {
    if (seed_opt->count() == 0) return std::nullopt;
    return seed;
  };

  int code = 0;

  fv::cli::GenOptions gen;
  std::size_t gen_frames = 0;
  auto* gen_cmd = app.add_subcommand("gen", "Render a preset (or 'all', or a scene file) into a stream directory");
  gen_cmd->add_option("source", gen.source, "lab1 | lab2 | difficult | rc2012 | rc2013 | all | scene.json")->required();
  auto* frames_opt = gen_cmd->add_option("--frames", gen_frames, "Frame count (presets only)");
  gen_cmd->add_flag("--clean", gen.clean, "No per-pixel noise (presets only)");
  gen_cmd->callback([&] {
    gen.output = output.empty() ? std::filesystem::path(gen.source == "all" ? "streams" : gen.source) : std::filesystem::path(output);
    if (frames_opt->count()) gen.frames = gen_frames;
    if (auto s = opt_seed()) gen.seed = *s;
    code = fv::cli::cli_gen(gen, std::cout, std::cerr);
  });

  std::string rules_path;
  auto* lut_cmd = app.add_subcommand("build-lut", "Build a colour table from a rules document");
  lut_cmd->add_option("rules", rules_path, "Rules document (JSON); default field rules when omitted");
  lut_cmd->callback([&] {
    fv::cli::BuildLutOptions o;
    if (!rules_path.empty()) o.rules = rules_path;
    o.output = output.empty() ? "field.vlut" : output;
    code = fv::cli::cli_build_lut(o, std::cout, std::cerr);
  });

  fv::cli::RunOptions run;
  std::string run_stream, run_backend = "kinematic";
  auto* run_cmd = app.add_subcommand("run", "Run the pipeline over a stream and write detections");
  run_cmd->add_option("stream", run_stream, "Stream directory")->required();
  run_cmd->add_option("--backend", run_backend, "kinematic | headless")
      ->check(CLI::IsMember({"kinematic", "headless"}));
  run_cmd->add_option("--disable", run.disable, "Stage to switch off (repeatable)");
  run_cmd->callback([&] {
    run.stream = run_stream;
    run.config = opt_config();
    run.seed = opt_seed();
    run.output = output.empty() ? "run" : output;
    run.backend = parse_backend(run_backend);
    code = fv::cli::cli_run(run, std::cout, std::cerr);
  });

  fv::cli::BenchOptions bench;
  std::vector<std::string> bench_streams;
  std::string bench_backend = "kinematic";
  auto* bench_cmd = app.add_subcommand("bench", "Time the pipeline over one or more streams");
  bench_cmd->add_option("streams", bench_streams, "Stream directories")->required();
  bench_cmd->add_option("--repetitions", bench.repetitions, "Timed passes per stream")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--backend", bench_backend, "kinematic | headless")
      ->check(CLI::IsMember({"kinematic", "headless"}));
  bench_cmd->callback([&] {
    for (const auto& s : bench_streams) bench.streams.emplace_back(s);
    bench.config = opt_config();
    bench.seed = opt_seed();
    bench.output = output.empty() ? "bench" : output;
    bench.backend = parse_backend(bench_backend);
    code = fv::cli::cli_bench(bench, std::cout, std::cerr);
  });

  fv::cli::ScoreOptions score;
  std::string det_path, truth_path;
  auto* score_cmd = app.add_subcommand("score", "Score detections against ground truth");
  score_cmd->add_option("detections", det_path, "detections.jsonl")->required();
  score_cmd->add_option("truth", truth_path, "truth.jsonl")->required();
  score_cmd->add_option("--ball-px", score.tolerances.ball_px, "Ball centre tolerance");
  score_cmd->add_option("--post-px", score.tolerances.post_px, "Post base tolerance");
  score_cmd->add_option("--obstacle-iou", score.tolerances.obstacle_iou, "Minimum obstacle x-span IoU");
  score_cmd->add_option("--line-px", score.tolerances.line_px, "Line offset tolerance");
  score_cmd->add_option("--line-deg", score.tolerances.line_deg, "Line angle tolerance");
  score_cmd->callback([&] {
    score.detections = det_path;
    score.truth = truth_path;
    if (!output.empty()) score.output = output;
    code = fv::cli::cli_score(score, std::cout, std::cerr);
  });

  fv::cli::CompareOptions cmp;
  std::string a_path, b_path;
  auto* cmp_cmd = app.add_subcommand("compare", "Percentage change between two bench reports");
  cmp_cmd->add_option("a", a_path, "Baseline bench.json")->required();
  cmp_cmd->add_option("b", b_path, "Candidate bench.json")->required();
  cmp_cmd->callback([&] {
    cmp.a = a_path;
    cmp.b = b_path;
    if (!output.empty()) cmp.output = output;
    code = fv::cli::cli_compare(cmp, std::cout, std::cerr);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fv::cli::kExitConfig;
  }
  return code;
}
