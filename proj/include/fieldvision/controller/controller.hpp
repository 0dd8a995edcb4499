/**
 * @file controller.hpp
 *
 * Runs the seven processing stages in their fixed order against a
 * blackboard. In Rigid mode every stage runs on every frame; in Selective
 * mode stages can be switched off, provided their prerequisites stay on.
 */

#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fieldvision/blackboard/blackboard.hpp"
#include "fieldvision/controller/stages.hpp"

namespace fv {

struct StagePlan {
  ControllerMode mode = ControllerMode::Selective;
  std::array<bool, kStageCount> enabled = {true, true, true, true, true, true, true};

  bool is_enabled(Stage s) const { return enabled[stage_index(s)]; }
  StagePlan& set(Stage s, bool on) {
    enabled[stage_index(s)] = on;
    return *this;
  }

  friend bool operator==(const StagePlan&, const StagePlan&) = default;
};

class PlanError : public std::invalid_argument {
 public:
  PlanError(Stage stage, Stage missing)
      : std::invalid_argument("stage '" + std::string(stage_name(stage)) +
                              "' is enabled but its prerequisite '" +
                              std::string(stage_name(missing)) + "' is disabled"),
        stage_(stage),
        missing_(missing) {}

  Stage stage() const { return stage_; }
  Stage missing_prerequisite() const { return missing_; }

 private:
  Stage stage_;
  Stage missing_;
};

/// A plan whose enabled set is closed under prerequisites. Only
/// validate_plan constructs one.
class ValidatedPlan {
 public:
  const StagePlan& plan() const { return plan_; }
  ControllerMode mode() const { return plan_.mode; }
  bool is_enabled(Stage s) const { return plan_.is_enabled(s); }

 private:
  friend ValidatedPlan validate_plan(StagePlan plan);
  explicit ValidatedPlan(StagePlan p) : plan_(p) {}
  StagePlan plan_;
};

/// Rigid plans are forced to all-enabled. Throws PlanError naming the first
/// enabled stage whose prerequisite is disabled.
inline ValidatedPlan validate_plan(StagePlan plan) {
  if (plan.mode == ControllerMode::Rigid) plan.enabled.fill(true);
  for (Stage s : kStageOrder) {
    if (!plan.is_enabled(s)) continue;
    if (auto pre = stage_prerequisite(s); pre && !plan.is_enabled(*pre)) throw PlanError(s, *pre);
  }
  return ValidatedPlan(plan);
}

/// Results of one frame. A disengaged member means the producing stage did
/// not run successfully (suppressed or failed), which is distinct from an
/// empty list.
struct DetectionSet {
  std::optional<std::vector<BallDetection>> balls;
  std::optional<std::vector<Goalpost>> goalposts;
  std::optional<std::vector<Obstacle>> obstacles;
  std::optional<std::vector<FieldLine>> lines;

  friend bool operator==(const DetectionSet&, const DetectionSet&) = default;
};

struct FrameReport {
  std::uint64_t sequence_index = 0;
  std::uint64_t timestamp_us = 0;
  std::array<StageStatus, kStageCount> status{};
  std::array<std::optional<std::int64_t>, kStageCount> duration_ns{};
  std::int64_t total_ns = 0;
  DetectionSet detections;

  StageStatus status_of(Stage s) const { return status[stage_index(s)]; }
  double total_ms() const { return static_cast<double>(total_ns) / 1e6; }
};

/// Default stage runner; tests substitute their own to inject failures.
struct DefaultStageRunner {
  void operator()(Stage s, VisionBlackboard& bb, const PipelineParams& p, ControllerMode m) const {
    stages::run(s, bb, p, m);
  }
};

namespace detail {
template <Slot S>
auto collect(const VisionBlackboard& bb) -> std::optional<slot_value_t<S>> {
  if (!bb.readable<S>()) return std::nullopt;
  return bb.read<S>();
}

inline std::int64_t elapsed_ns(std::chrono::steady_clock::time_point from,
                               std::chrono::steady_clock::time_point to) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(to - from).count();
}
}  // namespace detail

/**
 * Runs one frame. Disabled stages are marked suppressed, as are stages whose
 * prerequisite did not finish ok. Exceptions thrown by a stage are caught and
 * recorded as failed; independent stages still run.
 */
template <typename Runner = DefaultStageRunner>
FrameReport run_frame(const ValidatedPlan& plan, VisionBlackboard& bb, const PipelineParams& params,
                      Frame frame, KinematicsSnapshot kinematics, Runner&& runner = {}) {
  using clock = std::chrono::steady_clock;
  const auto frame_start = clock::now();
  FrameReport report;
  report.sequence_index = frame.sequence_index();
  report.timestamp_us = frame.timestamp_us();
  bb.begin_frame(std::move(frame), std::move(kinematics));

  for (Stage s : kStageOrder) {
    const auto pre = stage_prerequisite(s);
    if (!plan.is_enabled(s) || (pre && bb.status(*pre) != StageStatus::Ok)) {
      bb.set_status(s, StageStatus::Suppressed);
      continue;
    }
    const auto t0 = clock::now();
    StageStatus status = StageStatus::Ok;
    try {
      runner(s, bb, params, plan.mode());
    } catch (...) {
      status = StageStatus::Failed;
    }
    const auto t1 = clock::now();
    bb.set_status(s, status);
    bb.set_duration(s, detail::elapsed_ns(t0, t1));
  }

  for (Stage s : kStageOrder) {
    report.status[stage_index(s)] = bb.status(s);
    report.duration_ns[stage_index(s)] = bb.duration_ns(s);
  }
  report.detections.balls = detail::collect<Slot::Balls>(bb);
  report.detections.goalposts = detail::collect<Slot::Goalposts>(bb);
  report.detections.obstacles = detail::collect<Slot::Obstacles>(bb);
  report.detections.lines = detail::collect<Slot::Lines>(bb);
  report.total_ns = detail::elapsed_ns(frame_start, clock::now());
  return report;
}

/// Mean and sample standard deviation of per-frame totals, in milliseconds.
struct StreamSummary {
  std::size_t count = 0;
  std::optional<double> mean_ms;  // undefined for an empty stream
  std::optional<double> std_ms;   // undefined for fewer than two frames
};

inline StreamSummary summarize_ms(const std::vector<double>& totals_ms) {
  StreamSummary s;
  s.count = totals_ms.size();
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double v : totals_ms) sum += v;
  const double mean = sum / static_cast<double>(s.count);
  s.mean_ms = mean;
  if (s.count >= 2) {
    double ss = 0.0;
    for (double v : totals_ms) ss += (v - mean) * (v - mean);
    s.std_ms = std::sqrt(ss / static_cast<double>(s.count - 1));
  }
  return s;
}

/// Anything that hands out frames one at a time until it returns nullopt.
template <typename T>
concept FrameSource = requires(T& source) {
  { source.next() } -> std::convertible_to<std::optional<FrameInput>>;
};

class StreamAborted : public std::runtime_error {
 public:
  StreamAborted(std::size_t completed, const std::string& what)
      : std::runtime_error("stream aborted after " + std::to_string(completed) + " frames: " + what),
        completed_(completed) {}
  std::size_t frames_completed() const { return completed_; }

 private:
  std::size_t completed_;
};

/// Processes frames until the source is exhausted, handing each report to
/// `sink`. Source errors abort with the number of frames completed.
template <FrameSource Source, typename Sink>
StreamSummary run_stream(const ValidatedPlan& plan, VisionBlackboard& bb,
                         const PipelineParams& params, Source& source, Sink&& sink) {
  std::vector<double> totals;
  for (;;) {
    std::optional<FrameInput> input;
    try {
      input = source.next();
    } catch (const std::exception& e) {
      throw StreamAborted(totals.size(), e.what());
    }
    if (!input) break;
    FrameReport report = run_frame(plan, bb, params, std::move(input->frame),
                                   std::move(input->kinematics));
    totals.push_back(report.total_ms());
    sink(report);
  }
  return summarize_ms(totals);
}

}  // namespace fv
