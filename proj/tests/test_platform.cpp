#include <gtest/gtest.h>

#include <fstream>

#include "fieldvision/platform/control_wrapper.hpp"
#include "fieldvision/platform/data_wrapper.hpp"
#include "fieldvision/synthgen/emit.hpp"
#include "support.hpp"

using namespace fv;
using namespace fv::platform;

namespace {

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& j) {
  std::ofstream(dir / kManifestName) << j.dump();
}

std::vector<FrameInput> lab_inputs(std::size_t n) {
  std::vector<FrameInput> v;
  synth::PresetOptions o;
  o.clean = true;
  for (std::size_t i = 0; i < n; ++i) {
    auto [f, gt] = synth::render_scene(synth::preset_scene("lab2", i, o), i);
    f.set_sequence(i, i * 33333);
    v.push_back({std::move(f), {}});
  }
  return v;
}

}  // namespace

TEST(Ppm, RoundTrip) {
  fvtest::TempDir dir;
  Frame f = Frame::filled(5, 3, paint::kOrange);
  f.at(4, 2) = paint::kWhite;
  write_ppm(dir / "a.ppm", f);
  const Frame g = read_ppm(dir / "a.ppm");
  EXPECT_EQ(g.pixels(), f.pixels());
  EXPECT_EQ(g.width(), 5);
}

TEST(Ppm, RejectsOtherFormats) {
  const std::string p3 = "P3\n2 2\n255\n0 0 0 0 0 0 0 0 0 0 0 0\n";
  EXPECT_THROW(decode_ppm(std::vector<std::uint8_t>(p3.begin(), p3.end()), "x"), FrameFormatError);
  const std::string truncated = "P6\n2 2\n255\n\x01\x02";
  EXPECT_THROW(decode_ppm(std::vector<std::uint8_t>(truncated.begin(), truncated.end()), "x"), FrameFormatError);
  EXPECT_THROW(read_ppm("/nonexistent/frame.ppm"), FrameReadError);
}

TEST(Stream, MissingFrameFileIsNamed) {
  fvtest::TempDir dir;
  write_ppm(dir / "f0.ppm", Frame::filled(4, 4, paint::kGreen));
  write_manifest(dir.path(), {{"name", "s"}, {"width", 4}, {"height", 4}, {"fps", 30}, {"frames", {"f0.ppm", "f1.ppm"}}});
  try {
    open_stream(dir.path());
    FAIL();
  } catch (const StreamError& e) {
    EXPECT_NE(std::string(e.what()).find("f1.ppm"), std::string::npos);
  }
}

TEST(Stream, MixedDimensionsAreRejected) {
  fvtest::TempDir dir;
  write_ppm(dir / "f0.ppm", Frame::filled(4, 4, paint::kGreen));
  write_ppm(dir / "f1.ppm", Frame::filled(6, 4, paint::kGreen));
  write_manifest(dir.path(), {{"name", "s"}, {"width", 4}, {"height", 4}, {"fps", 30}, {"frames", {"f0.ppm", "f1.ppm"}}});
  EXPECT_THROW(open_stream(dir.path()), StreamError);
}

TEST(Stream, MissingManifestOrDirectory) {
  fvtest::TempDir dir;
  EXPECT_THROW(open_stream(dir.path()), StreamError);
  EXPECT_THROW(open_stream(dir / "nope"), StreamError);
  std::ofstream(dir / kManifestName) << "{not json";
  EXPECT_THROW(open_stream(dir.path()), StreamError);
}

TEST(Stream, LongManifestTimestampsFollowFps) {
  fvtest::TempDir dir;
  const Frame tiny = Frame::filled(2, 2, paint::kGreen);
  std::vector<std::string> names;
  for (int i = 0; i < 9000; ++i) {
    names.push_back(synth::frame_file_name(static_cast<std::size_t>(i)));
    write_ppm(dir / names.back(), tiny);
  }
  write_manifest(dir.path(), {{"name", "long"}, {"width", 2}, {"height", 2}, {"fps", 30}, {"frames", names}});
  StreamOptions opts;
  opts.check_frame_headers = false;
  HeadlessReplayBackend backend(dir.path(), nullptr, opts);
  EXPECT_EQ(backend.frame_count(), 9000u);
  std::optional<FrameInput> last;
  std::size_t n = 0;
  while (auto in = backend.next()) {
    last = std::move(in);
    ++n;
  }
  EXPECT_EQ(n, 9000u);
  EXPECT_EQ(last->frame.sequence_index(), 8999u);
  EXPECT_EQ(last->frame.timestamp_us(), 299966667u);
}

TEST(Stream, KinematicsSidecarRoundTrip) {
  fvtest::TempDir dir;
  KinematicsSnapshot k;
  k.valid = true;
  k.horizon = Line2::through(0, 100, 10, 90);
  k.camera_pitch = 0.3;
  k.camera_height = 0.45;
  std::ofstream(dir / kKinematicsName) << kinematics_to_json(4, k).dump() << "\n";
  const auto m = read_kinematics(dir / kKinematicsName);
  ASSERT_EQ(m.count(4), 1u);
  EXPECT_EQ(m.at(4).valid, true);
  EXPECT_NEAR(m.at(4).horizon.c(), k.horizon.c(), 1e-12);
  std::ofstream(dir / "bad.jsonl") << "{\"seq\": 1}\n";
  EXPECT_THROW(read_kinematics(dir / "bad.jsonl"), StreamError);
}

TEST(Backends, KinematicAndHeadlessDeliverTheSameFrames) {
  fvtest::TempDir dir;
  synth::PresetOptions o;
  o.clean = true;
  synth::emit_preset("lab1", 4, dir.path(), o);
  auto a = open_replay(BackendKind::Kinematic, dir.path());
  auto b = open_replay(BackendKind::Headless, dir.path());
  for (int i = 0; i < 4; ++i) {
    auto fa = a->next(), fb = b->next();
    ASSERT_TRUE(fa && fb);
    EXPECT_EQ(fa->frame.pixels(), fb->frame.pixels());
    EXPECT_TRUE(fa->kinematics.valid);
    EXPECT_FALSE(fb->kinematics.valid);
  }
  EXPECT_FALSE(a->next().has_value());
}

TEST(Backends, MemoryBackendHandsOutCopies) {
  MemoryBackend mem(lab_inputs(1));
  auto got = mem.next();
  ASSERT_TRUE(got);
  const auto before = got->frame.pixels();
  mem.inputs()[0].frame.at(0, 0) = paint::kOrange;
  EXPECT_EQ(got->frame.pixels(), before);
}

TEST(ControlWrapper, DisableThenReenable) {
  MemoryBackend mem(lab_inputs(3));
  ControlWrapper cw(mem, PipelineParams{});
  cw.set_stage_enabled("line-detection", false);
  auto r0 = cw.run_frame();
  ASSERT_TRUE(r0);
  EXPECT_EQ(r0->status_of(Stage::LineDetection), StageStatus::Suppressed);
  cw.set_stage_enabled(Stage::LineDetection, true);
  auto r1 = cw.run_frame();
  EXPECT_EQ(r1->status_of(Stage::LineDetection), StageStatus::Ok);
  ASSERT_TRUE(cw.last_detections());
  EXPECT_TRUE(cw.last_detections()->lines.has_value());
}

TEST(ControlWrapper, RejectsDisablingARequiredStage) {
  MemoryBackend mem(lab_inputs(1));
  ControlWrapper cw(mem, PipelineParams{});
  EXPECT_THROW(cw.set_stage_enabled("scanline-classifier", false), PlanError);
  EXPECT_THROW(cw.set_stage_enabled("colour-magic", false), UnknownStage);
  // The rejected change was not recorded.
  const auto r = cw.run_frame();
  EXPECT_EQ(r->status_of(Stage::ScanlineClassifier), StageStatus::Ok);
}

TEST(ControlWrapper, DisablingDependentsFirstIsAllowed) {
  MemoryBackend mem(lab_inputs(1));
  ControlWrapper cw(mem, PipelineParams{});
  for (const char* s : {"ball-detection", "goal-detection", "line-detection", "transition-filter"})
    cw.set_stage_enabled(s, false);
  const auto r = cw.run_frame();
  EXPECT_EQ(r->status_of(Stage::TransitionFilter), StageStatus::Suppressed);
  EXPECT_EQ(r->status_of(Stage::ObstacleDetection), StageStatus::Ok);
}

TEST(ControlWrapper, InvalidParamsRejectedUpFront) {
  MemoryBackend mem(lab_inputs(1));
  PipelineParams p;
  p.scan.vertical_spacing = 0;
  EXPECT_THROW(ControlWrapper(mem, p), InvalidArgument);
}

TEST(ControlWrapper, StreamEndsCleanly) {
  MemoryBackend mem(lab_inputs(4));
  ControlWrapper cw(mem, PipelineParams{});
  std::vector<std::uint64_t> seqs;
  const auto s = cw.run_stream([&](const FrameReport& r) { seqs.push_back(r.sequence_index); });
  EXPECT_EQ(seqs, (std::vector<std::uint64_t>{0, 1, 2, 3}));
  EXPECT_EQ(s.count, 4u);
  EXPECT_FALSE(cw.run_frame().has_value());
}

TEST(LutFile, RulesDocumentRoundTrip) {
  fvtest::TempDir dir;
  const auto rules = default_field_rules();
  std::ofstream(dir / "rules.json") << rules_to_json(rules).dump();
  EXPECT_EQ(read_rules_file(dir / "rules.json"), rules);
  write_lut_file(dir / "t.vlut", build_lut(rules));
  EXPECT_EQ(read_lut_file(dir / "t.vlut"), build_lut(rules));
}

TEST(LutFile, BadRulesAreRejected) {
  EXPECT_THROW(rules_from_json(nlohmann::json::parse(R"({"rules": [{"colour": "Purple"}]})")), RulesError);
  EXPECT_THROW(rules_from_json(nlohmann::json::parse(R"({"nope": 1})")), RulesError);
}
