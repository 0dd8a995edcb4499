#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fieldvision/bench/cli.hpp"
#include "support.hpp"

using namespace fv;
using namespace fv::bench;
namespace cli = fv::cli;

namespace {

nlohmann::json parse(const char* s) { return nlohmann::json::parse(s); }

std::filesystem::path make_stream(const fvtest::TempDir& dir, const char* preset, std::size_t n) {
  synth::PresetOptions o;
  o.clean = true;
  synth::emit_preset(preset, n, dir / preset, o);
  return dir / preset;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FrameLogEntry entry(const std::string& stream, std::uint64_t seq, double ms) {
  FrameLogEntry e;
  e.stream = stream;
  e.seq = seq;
  e.total_ns = static_cast<std::int64_t>(ms * 1e6);
  return e;
}

}  // namespace

// Config ---------------------------------------------------------------------

TEST(Config, MinimalDocumentUsesDefaults) {
  const auto c = config_from_json(parse(R"({"version": 1})"));
  EXPECT_EQ(c.params, PipelineParams{});
  EXPECT_EQ(c.plan, StagePlan{});
  EXPECT_EQ(c.seed, kDefaultSeed);
  EXPECT_FALSE(c.lut_path.has_value());
}

TEST(Config, FieldsAreRead) {
  const auto c = config_from_json(parse(R"({"version": 1, "mode": "rigid", "seed": 9,
      "scan": {"vertical_spacing": 4}, "goal_ransac": {"iterations": 50},
      "stages": {"line-detection": false}, "obstacle": {"alpha": 4}})"));
  EXPECT_EQ(c.plan.mode, ControllerMode::Rigid);
  EXPECT_EQ(c.params.scan.vertical_spacing, 4);
  EXPECT_EQ(c.params.goal_ransac.iterations, 50);
  EXPECT_EQ(c.params.obstacle.alpha, 4);
  EXPECT_FALSE(c.plan.is_enabled(Stage::LineDetection));
  EXPECT_EQ(c.resolved_params().goal_ransac.seed, 9u);
  EXPECT_EQ(c.resolved_params().line_ransac.seed, 10u);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const char* doc) -> std::string {
    try {
      config_from_json(nlohmann::json::parse(doc));
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(R"({"version": 1, "scan": {"spacing": 3}})").find("scan.spacing"), std::string::npos);
  EXPECT_NE(message(R"({"version": 1, "ball": {"min_radius": "big"}})").find("ball.min_radius"), std::string::npos);
  EXPECT_NE(message(R"({"version": 2})").find("version"), std::string::npos);
  EXPECT_NE(message(R"({"version": 1, "mode": "fast"})").find("mode"), std::string::npos);
  EXPECT_NE(message(R"({"version": 1, "stages": {"transition-filter": false}})").find("stages"), std::string::npos);
  EXPECT_NE(message(R"({"version": 1, "stages": {"warp": true}})").find("stages.warp"), std::string::npos);
  EXPECT_NE(message(R"({"version": 1, "scan": {"vertical_spacing": 0}})").find("vertical_spacing"), std::string::npos);
}

TEST(Config, CanonicalRoundTrip) {
  const auto c = config_from_json(parse(R"({"version": 1, "seed": 3, "line": {"merge_angle_deg": 2.5}})"));
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_fingerprint(back), config_fingerprint(c));
}

TEST(Config, FingerprintTracksContent) {
  const auto a = config_from_json(parse(R"({"version": 1})"));
  const auto b = config_from_json(parse(R"({"version": 1, "seed": 7})"));
  const auto a2 = config_from_json(parse(R"({"mode": "selective", "version": 1})"));
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
  EXPECT_EQ(config_fingerprint(a), config_fingerprint(a2));
  EXPECT_EQ(config_fingerprint(a).size(), 16u);
}

TEST(Config, RelativeLutPathResolvesAgainstFile) {
  fvtest::TempDir dir;
  std::ofstream(dir / "c.json") << R"({"version": 1, "lut": "tables/field.vlut"})";
  const auto c = read_config_file(dir / "c.json");
  EXPECT_EQ(*c.lut_path, (dir.path() / "tables/field.vlut").lexically_normal().string());
}

// Records --------------------------------------------------------------------

TEST(Records, DetectionJsonRoundTrip) {
  DetectionSet d;
  d.balls = std::vector<BallDetection>{{Point2{3, 4}, 7.5, {false, false, true, false}, 12}};
  d.goalposts = std::vector<Goalpost>{};
  d.obstacles = std::vector<Obstacle>{{8, 40, {24, 90}, 5, 1}};
  std::array<StageStatus, kStageCount> st{};
  st.fill(StageStatus::Ok);
  st[stage_index(Stage::LineDetection)] = StageStatus::Suppressed;
  const auto j = detections_to_json(5, st, d);
  EXPECT_TRUE(j["lines"].is_null());
  EXPECT_TRUE(j["goalposts"].is_array());
  const auto rec = detections_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(rec.seq, 5u);
  EXPECT_EQ(rec.status, st);
  EXPECT_EQ(rec.detections.balls->at(0).centre, (Point2{3, 4}));
  EXPECT_TRUE(rec.detections.balls->at(0).is_occluded(BallEdge::Left));
  EXPECT_EQ(rec.detections.obstacles->at(0).right_x, 40);
  EXPECT_FALSE(rec.detections.lines.has_value());
}

// Report ---------------------------------------------------------------------

TEST(Report, OverallIsFrameWeighted) {
  std::vector<FrameLogEntry> log;
  for (std::uint64_t i = 0; i < 5000; ++i) log.push_back(entry("a", i, 10.0));
  for (std::uint64_t i = 0; i < 4000; ++i) log.push_back(entry("b", i, 20.0));
  const auto r = build_report(log, {"a", "b"}, "f", "selective", 1);
  EXPECT_EQ(r.overall.frames, 9000u);
  EXPECT_NEAR(*r.overall.mean_ms, (5000 * 10.0 + 4000 * 20.0) / 9000.0, 1e-9);
  EXPECT_NEAR(*r.streams[0].mean_ms, 10.0, 1e-9);
  EXPECT_NEAR(*r.streams[0].std_ms, 0.0, 1e-9);
}

TEST(Report, MeanAndStdMatchSummary) {
  std::vector<FrameLogEntry> log = {entry("s", 0, 10), entry("s", 1, 12), entry("s", 2, 14)};
  const auto r = build_report(log, {"s"}, "f", "rigid", 1);
  EXPECT_NEAR(*r.streams[0].mean_ms, 12.0, 1e-9);
  EXPECT_NEAR(*r.streams[0].std_ms, 2.0, 1e-9);
  EXPECT_NE(report_table(r).find("12.00 (2.00)"), std::string::npos);
}

TEST(Report, JsonRoundTrip) {
  std::vector<FrameLogEntry> log = {entry("s", 0, 10), entry("s", 1, 12)};
  log[0].stage_ns[0] = 1000;
  const auto r = build_report(log, {"s"}, "abc", "selective", 2);
  const auto back = report_from_json(report_to_json(r));
  EXPECT_EQ(report_to_json(back), report_to_json(r));
}

TEST(Compare, PercentageAndFps) {
  const auto row = compare_means("rc2012", 19.41, 12.52);
  EXPECT_NEAR(row.delta_pct, -35.5, 0.05);
  EXPECT_NEAR(row.a_fps, 51.5, 0.05);
  EXPECT_NEAR(row.b_fps, 79.9, 0.05);
  const auto slow = compare_means("x", 43.88, 12.52);
  EXPECT_NEAR(slow.a_fps, 22.8, 0.05);
  EXPECT_NEAR(slow.b_fps, 79.9, 0.05);
  EXPECT_THROW(compare_means("z", 0.0, 1.0), CompareError);
}

TEST(Compare, IdenticalReportsGiveZero) {
  std::vector<FrameLogEntry> log = {entry("s", 0, 10), entry("s", 1, 12)};
  const auto r = build_report(log, {"s"}, "f", "selective", 1);
  for (const auto& row : compare_reports(r, r)) EXPECT_DOUBLE_EQ(row.delta_pct, 0.0);
}

TEST(Compare, StreamSetMismatchIsRejected) {
  const auto a = build_report({entry("s", 0, 10)}, {"s"}, "f", "selective", 1);
  const auto b = build_report({entry("t", 0, 10)}, {"t"}, "f", "selective", 1);
  EXPECT_THROW(compare_reports(a, b), CompareError);
}

// Score ----------------------------------------------------------------------

TEST(Score, BallToleranceDecidesTheMatch) {
  synth::GroundTruth gt;
  gt.ball = synth::BallTruth{100, 100, 10};
  DetectionRecord near, far;
  near.detections.balls = std::vector<BallDetection>{{Point2{104, 100}, 10, {}, 4}};
  far.detections.balls = std::vector<BallDetection>{{Point2{106, 100}, 10, {}, 4}};
  const auto a = score({near}, {gt});
  EXPECT_EQ(a.ball.true_positives, 1u);
  EXPECT_NEAR(a.ball.errors[0], 4.0, 1e-12);
  const auto b = score({far}, {gt});
  EXPECT_EQ(b.ball.true_positives, 0u);
  EXPECT_EQ(b.ball.false_positives, 1u);
  EXPECT_EQ(b.ball.misses, 1u);
}

TEST(Score, EmptyDetectionsLeavePrecisionUndefined) {
  synth::GroundTruth gt;
  gt.ball = synth::BallTruth{100, 100, 10};
  DetectionRecord rec;
  rec.detections.balls = std::vector<BallDetection>{};
  const auto r = score({rec}, {gt});
  EXPECT_FALSE(r.ball.precision().has_value());
  EXPECT_DOUBLE_EQ(*r.ball.recall(), 0.0);
  const auto j = score_to_json(r);
  EXPECT_TRUE(j["ball"]["precision_undefined"].get<bool>());
  EXPECT_TRUE(j["ball"]["precision"].is_null());
}

TEST(Score, SuppressedStagesAreNotScored) {
  synth::GroundTruth gt;
  gt.ball = synth::BallTruth{100, 100, 10};
  DetectionRecord rec;
  const auto r = score({rec}, {gt});
  EXPECT_EQ(r.ball.frames, 0u);
  EXPECT_FALSE(r.ball.recall().has_value());
}

TEST(Score, FrameCountMismatchThrows) {
  EXPECT_THROW(score({DetectionRecord{}}, {}), ScoreError);
}

TEST(Score, SpanIouAndPercentile) {
  EXPECT_DOUBLE_EQ(span_iou(0, 9, 0, 9), 1.0);
  EXPECT_DOUBLE_EQ(span_iou(0, 9, 5, 14), 5.0 / 15.0);
  EXPECT_DOUBLE_EQ(span_iou(0, 4, 10, 14), 0.0);
  EXPECT_DOUBLE_EQ(*percentile({1, 2, 3, 4}, 50), 2.5);
  EXPECT_FALSE(percentile({}, 50).has_value());
}

TEST(Score, PinholeDistance) {
  EXPECT_NEAR(*estimate_distance(10, 500, 0.05), 2.5, 1e-12);
  EXPECT_FALSE(estimate_distance(0, 500, 0.05).has_value());
}

// CLI ------------------------------------------------------------------------

TEST(Cli, BuildLutWritesVlutHeader) {
  fvtest::TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cli_build_lut({std::nullopt, dir / "f.vlut"}, out, err), cli::kExitOk);
  const std::string bytes = slurp(dir / "f.vlut");
  ASSERT_EQ(bytes.size(), 6 + kLutEntries);
  EXPECT_EQ(bytes.substr(0, 4), "VLUT");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 6);
}

TEST(Cli, BuildLutFromEmptyRules) {
  fvtest::TempDir dir;
  std::ofstream(dir / "r.json") << R"({"version": 1, "rules": []})";
  std::ostringstream out, err;
  ASSERT_EQ(cli::cli_build_lut({dir / "r.json", dir / "e.vlut"}, out, err), cli::kExitOk);
  const auto lut = platform::read_lut_file(dir / "e.vlut");
  EXPECT_EQ(lut, ColourLUT{});
}

TEST(Cli, BuildLutRejectsInvalidRange) {
  fvtest::TempDir dir;
  std::ofstream(dir / "r.json") << R"({"version": 1, "rules": [{"class": "LineWhite", "luma": [200, 100]}]})";
  std::ostringstream out, err;
  EXPECT_EQ(cli::cli_build_lut({dir / "r.json", dir / "x.vlut"}, out, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("luma"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.vlut"));
}

TEST(Cli, GenUnknownSourceIsAConfigError) {
  fvtest::TempDir dir;
  std::ostringstream out, err;
  cli::GenOptions g;
  g.source = "rc2099";
  g.output = dir / "x";
  EXPECT_EQ(cli::cli_gen(g, out, err), cli::kExitConfig);
}

TEST(Cli, RunWritesOneRecordPerFrame) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 10);
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  ASSERT_EQ(cli::cli_run(r, out, err), cli::kExitOk) << err.str();
  const auto recs = read_detections(dir / "run" / cli::kDetectionsName);
  ASSERT_EQ(recs.size(), 10u);
  for (std::size_t i = 0; i < recs.size(); ++i) EXPECT_EQ(recs[i].seq, i);
  EXPECT_EQ(read_frame_log(dir / "run" / cli::kFrameLogName).size(), 10u);
}

TEST(Cli, RunDisableMarksStageSuppressed) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 3);
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  r.disable = {"ball-detection"};
  ASSERT_EQ(cli::cli_run(r, out, err), cli::kExitOk);
  for (const auto& rec : read_detections(dir / "run" / cli::kDetectionsName)) {
    EXPECT_EQ(rec.status[stage_index(Stage::BallDetection)], StageStatus::Suppressed);
    EXPECT_FALSE(rec.detections.balls.has_value());
  }
}

TEST(Cli, RunMalformedConfigNamesTheField) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 1);
  std::ofstream(dir / "c.json") << R"({"version": 1, "goal": {"max_tilt": 10}})";
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  r.config = dir / "c.json";
  EXPECT_EQ(cli::cli_run(r, out, err), cli::kExitConfig);
  EXPECT_NE(err.str().find("goal.max_tilt"), std::string::npos);
}

TEST(Cli, RunRejectsBadDisableAndMissingStream) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 1);
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  r.disable = {"green-horizon"};
  EXPECT_EQ(cli::cli_run(r, out, err), cli::kExitConfig);
  r.disable.clear();
  r.stream = dir / "missing";
  EXPECT_EQ(cli::cli_run(r, out, err), cli::kExitStream);
}

TEST(Cli, RunMidStreamCorruptionExitsWithStreamError) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 3);
  // Truncate the last frame after the header check has passed.
  const auto last = stream / synth::frame_file_name(2);
  const std::string bytes = slurp(last);
  std::ofstream(last, std::ios::binary | std::ios::trunc) << bytes.substr(0, 40);
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  EXPECT_EQ(cli::cli_run(r, out, err), cli::kExitStream);
  EXPECT_NE(err.str().find("after 2 frames"), std::string::npos);
}

TEST(Cli, BenchAndCompareRoundTrip) {
  fvtest::TempDir dir;
  const auto s1 = make_stream(dir, "lab2", 4);
  const auto s2 = make_stream(dir, "rc2013", 4);
  std::ostringstream out, err;
  cli::BenchOptions b;
  b.streams = {s1, s2};
  b.output = dir / "bench";
  b.repetitions = 2;
  ASSERT_EQ(cli::cli_bench(b, out, err), cli::kExitOk) << err.str();
  EXPECT_NE(out.str().find("lab2"), std::string::npos);
  EXPECT_EQ(read_frame_log(dir / "bench" / cli::kFrameLogName).size(), 16u);
  cli::CompareOptions c{dir / "bench" / cli::kBenchJsonName, dir / "bench" / cli::kBenchJsonName, dir / "cmp.json"};
  ASSERT_EQ(cli::cli_compare(c, out, err), cli::kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "cmp.json"));
  for (const auto& row : j["rows"]) EXPECT_DOUBLE_EQ(row["delta_pct"].get<double>(), 0.0);
}

TEST(Cli, CompareMismatchExits3) {
  fvtest::TempDir dir;
  const auto s1 = make_stream(dir, "lab2", 2);
  const auto s2 = make_stream(dir, "rc2013", 2);
  std::ostringstream out, err;
  cli::BenchOptions b;
  b.streams = {s1};
  b.output = dir / "a";
  ASSERT_EQ(cli::cli_bench(b, out, err), cli::kExitOk);
  b.streams = {s2};
  b.output = dir / "b";
  ASSERT_EQ(cli::cli_bench(b, out, err), cli::kExitOk);
  cli::CompareOptions c{dir / "a" / cli::kBenchJsonName, dir / "b" / cli::kBenchJsonName, std::nullopt};
  EXPECT_EQ(cli::cli_compare(c, out, err), cli::kExitStream);
}

TEST(Cli, ScoreReadsRunOutput) {
  fvtest::TempDir dir;
  const auto stream = make_stream(dir, "lab2", 5);
  std::ostringstream out, err;
  cli::RunOptions r;
  r.stream = stream;
  r.output = dir / "run";
  ASSERT_EQ(cli::cli_run(r, out, err), cli::kExitOk);
  cli::ScoreOptions s;
  s.detections = dir / "run" / cli::kDetectionsName;
  s.truth = stream / synth::kTruthName;
  s.output = dir / "score.json";
  ASSERT_EQ(cli::cli_score(s, out, err), cli::kExitOk);
  EXPECT_TRUE(nlohmann::json::parse(slurp(dir / "score.json")).contains("ball"));
  s.truth = dir / "missing.jsonl";
  EXPECT_EQ(cli::cli_score(s, out, err), cli::kExitStream);
}
