/**
 * @file control_wrapper.hpp
 *
 * The Control Wrapper: how the outside world drives the vision core. Stage
 * switches are staged and only take effect at the next frame boundary.
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fieldvision/blackboard/blackboard.hpp"
#include "fieldvision/controller/controller.hpp"
#include "fieldvision/platform/data_wrapper.hpp"

namespace fv::platform {

class UnknownStage : public std::invalid_argument {
 public:
  explicit UnknownStage(std::string_view name)
      : std::invalid_argument("unknown stage identifier '" + std::string(name) + "'") {}
};

class ControlWrapper {
 public:
  ControlWrapper(DataWrapper& data, PipelineParams params, StagePlan plan = {})
      : data_(data),
        blackboard_(data.lut()),
        params_(std::move(params)),
        pending_(plan),
        active_(validate_plan(plan)) {
    params_.validate();
  }

  /// Records the flag for the next frame. A change that would leave an
  /// enabled stage without its prerequisite is rejected and not recorded.
  void set_stage_enabled(Stage stage, bool enabled) {
    StagePlan candidate = pending_;
    candidate.set(stage, enabled);
    validate_plan(candidate);
    pending_ = candidate;
  }

  void set_stage_enabled(std::string_view stage, bool enabled) {
    const auto s = parse_stage(stage);
    if (!s) throw UnknownStage(stage);
    set_stage_enabled(*s, enabled);
  }

  /// Processes the next frame; nullopt at end of stream.
  std::optional<FrameReport> run_frame() {
    active_ = validate_plan(pending_);
    auto input = data_.next();
    if (!input) return std::nullopt;
    FrameReport report = fv::run_frame(active_, blackboard_, params_, std::move(input->frame),
                                       std::move(input->kinematics));
    last_ = report.detections;
    return report;
  }

  template <typename Sink>
  StreamSummary run_stream(Sink&& sink) {
    std::vector<double> totals;
    for (;;) {
      std::optional<FrameReport> report;
      try {
        report = run_frame();
      } catch (const std::exception& e) {
        throw StreamAborted(totals.size(), e.what());
      }
      if (!report) break;
      totals.push_back(report->total_ms());
      sink(*report);
    }
    return summarize_ms(totals);
  }

  const std::optional<DetectionSet>& last_detections() const { return last_; }
  const ValidatedPlan& active_plan() const { return active_; }
  const StagePlan& pending_plan() const { return pending_; }

 private:
  DataWrapper& data_;
  VisionBlackboard blackboard_;
  PipelineParams params_;
  StagePlan pending_;
  ValidatedPlan active_;
  std::optional<DetectionSet> last_;
};

}  // namespace fv::platform
