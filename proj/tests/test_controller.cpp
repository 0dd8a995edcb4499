#include <gtest/gtest.h>

#include <deque>
#include <numeric>

#include "fieldvision/controller/controller.hpp"
#include "fieldvision/synthgen/presets.hpp"
#include "fieldvision/synthgen/scene.hpp"
#include "support.hpp"

using namespace fv;

namespace {

struct FailingRunner {
  Stage failing;
  void operator()(Stage s, VisionBlackboard& bb, const PipelineParams& p, ControllerMode m) const {
    if (s == failing) throw std::runtime_error("injected");
    stages::run(s, bb, p, m);
  }
};

Frame scene_frame(std::size_t i) {
  synth::PresetOptions o;
  o.clean = true;
  return synth::render_scene(synth::preset_scene("lab2", i, o), i).first;
}

}  // namespace

TEST(Plan, MissingPrerequisiteIsRejected) {
  StagePlan plan;
  plan.set(Stage::TransitionFilter, false);
  try {
    validate_plan(plan);
    FAIL() << "expected PlanError";
  } catch (const PlanError& e) {
    EXPECT_EQ(e.stage(), Stage::BallDetection);
    EXPECT_EQ(e.missing_prerequisite(), Stage::TransitionFilter);
  }
}

TEST(Plan, ObstaclesNeedOnlyTheHorizon) {
  StagePlan plan;
  for (Stage s : {Stage::ScanlineClassifier, Stage::TransitionFilter, Stage::BallDetection,
                  Stage::GoalDetection, Stage::LineDetection})
    plan.set(s, false);
  EXPECT_NO_THROW(validate_plan(plan));
}

TEST(Plan, RigidEnablesEverything) {
  StagePlan plan;
  plan.mode = ControllerMode::Rigid;
  plan.set(Stage::GreenHorizon, false);
  const auto v = validate_plan(plan);
  for (Stage s : kStageOrder) EXPECT_TRUE(v.is_enabled(s));
}

TEST(Controller, EveryStageGetsAStatus) {
  VisionBlackboard bb(default_lut());
  const auto plan = validate_plan(StagePlan{});
  for (std::size_t i = 0; i < 10; ++i) {
    const auto r = run_frame(plan, bb, PipelineParams{}, scene_frame(i), {});
    for (Stage s : kStageOrder) {
      EXPECT_NE(r.status_of(s), StageStatus::NotRun);
      EXPECT_EQ(r.duration_ns[stage_index(s)].has_value(),
                r.status_of(s) == StageStatus::Ok || r.status_of(s) == StageStatus::Failed);
    }
    std::int64_t sum = 0;
    for (const auto& d : r.duration_ns) sum += d.value_or(0);
    EXPECT_GE(r.total_ns, sum);
    EXPECT_TRUE(r.detections.balls && r.detections.goalposts && r.detections.obstacles && r.detections.lines);
  }
}

TEST(Controller, DisabledStageIsSuppressedAndHasNoResult) {
  VisionBlackboard bb(default_lut());
  StagePlan plan;
  plan.set(Stage::LineDetection, false);
  const auto r = run_frame(validate_plan(plan), bb, PipelineParams{}, scene_frame(0), {});
  EXPECT_EQ(r.status_of(Stage::LineDetection), StageStatus::Suppressed);
  EXPECT_FALSE(r.detections.lines.has_value());
  EXPECT_TRUE(r.detections.balls.has_value());
}

TEST(Controller, HorizonFailureCascades) {
  VisionBlackboard bb(default_lut());
  const auto r = run_frame(validate_plan(StagePlan{}), bb, PipelineParams{}, scene_frame(1), {},
                           FailingRunner{Stage::GreenHorizon});
  EXPECT_EQ(r.status_of(Stage::GreenHorizon), StageStatus::Failed);
  for (Stage s : kStageOrder) {
    if (s != Stage::GreenHorizon) {
      EXPECT_EQ(r.status_of(s), StageStatus::Suppressed) << stage_name(s);
    }
  }
  EXPECT_FALSE(r.detections.obstacles.has_value());
}

TEST(Controller, IndependentStagesSurviveAFailure) {
  VisionBlackboard bb(default_lut());
  const auto r = run_frame(validate_plan(StagePlan{}), bb, PipelineParams{}, scene_frame(2), {},
                           FailingRunner{Stage::BallDetection});
  EXPECT_EQ(r.status_of(Stage::BallDetection), StageStatus::Failed);
  EXPECT_EQ(r.status_of(Stage::GoalDetection), StageStatus::Ok);
  EXPECT_EQ(r.status_of(Stage::LineDetection), StageStatus::Ok);
  EXPECT_FALSE(r.detections.balls.has_value());
}

TEST(Controller, RigidModeNeverSuppressesWithoutFailure) {
  VisionBlackboard bb(default_lut());
  StagePlan plan;
  plan.mode = ControllerMode::Rigid;
  const auto vp = validate_plan(plan);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto r = run_frame(vp, bb, PipelineParams{}, scene_frame(i), {});
    for (Stage s : kStageOrder) EXPECT_EQ(r.status_of(s), StageStatus::Ok);
  }
}

TEST(Controller, RigidAndSelectiveAgreeOnDetections) {
  VisionBlackboard a(default_lut()), b(default_lut());
  StagePlan rigid;
  rigid.mode = ControllerMode::Rigid;
  const auto pr = validate_plan(rigid), ps = validate_plan(StagePlan{});
  for (std::size_t i = 0; i < 20; ++i) {
    const auto ra = run_frame(pr, a, PipelineParams{}, scene_frame(i), {});
    const auto rb = run_frame(ps, b, PipelineParams{}, scene_frame(i), {});
    EXPECT_EQ(ra.detections, rb.detections) << "frame " << i;
  }
}

TEST(Controller, SequenceMetadataIsCarried) {
  VisionBlackboard bb(default_lut());
  Frame f = scene_frame(0);
  f.set_sequence(17, 566666);
  const auto r = run_frame(validate_plan(StagePlan{}), bb, PipelineParams{}, f, {});
  EXPECT_EQ(r.sequence_index, 17u);
  EXPECT_EQ(r.timestamp_us, 566666u);
}

TEST(Summary, MeanAndSampleStd) {
  const auto s = summarize_ms({10, 12, 14});
  EXPECT_DOUBLE_EQ(*s.mean_ms, 12.0);
  EXPECT_DOUBLE_EQ(*s.std_ms, 2.0);
  EXPECT_FALSE(summarize_ms({}).mean_ms.has_value());
  const auto one = summarize_ms({5});
  EXPECT_DOUBLE_EQ(*one.mean_ms, 5.0);
  EXPECT_FALSE(one.std_ms.has_value());
}

namespace {

struct VectorSource {
  std::deque<FrameInput> frames;
  int throw_after = -1;
  std::optional<FrameInput> next() {
    if (throw_after == 0) throw std::runtime_error("disk gone");
    if (throw_after > 0) --throw_after;
    if (frames.empty()) return std::nullopt;
    auto f = std::move(frames.front());
    frames.pop_front();
    return f;
  }
};

}  // namespace

TEST(Stream, RunsUntilExhausted) {
  VectorSource src;
  for (std::size_t i = 0; i < 5; ++i) src.frames.push_back({scene_frame(i), {}});
  VisionBlackboard bb(default_lut());
  std::size_t n = 0;
  const auto s = run_stream(validate_plan(StagePlan{}), bb, PipelineParams{}, src, [&](const FrameReport&) { ++n; });
  EXPECT_EQ(n, 5u);
  EXPECT_EQ(s.count, 5u);
}

TEST(Stream, SourceErrorAbortsWithCount) {
  VectorSource src;
  for (std::size_t i = 0; i < 5; ++i) src.frames.push_back({scene_frame(i), {}});
  src.throw_after = 3;
  VisionBlackboard bb(default_lut());
  try {
    run_stream(validate_plan(StagePlan{}), bb, PipelineParams{}, src, [](const FrameReport&) {});
    FAIL();
  } catch (const StreamAborted& e) {
    EXPECT_EQ(e.frames_completed(), 3u);
  }
}
