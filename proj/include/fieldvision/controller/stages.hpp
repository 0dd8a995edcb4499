#pragma once

#include "fieldvision/blackboard/blackboard.hpp"
#include "fieldvision/detectors/ball.hpp"
#include "fieldvision/detectors/field_lines.hpp"
#include "fieldvision/detectors/goalposts.hpp"
#include "fieldvision/detectors/obstacles.hpp"
#include "fieldvision/preprocessing/green_horizon.hpp"
#include "fieldvision/preprocessing/scanlines.hpp"
#include "fieldvision/preprocessing/transitions.hpp"

namespace fv {

enum class ControllerMode : std::uint8_t { Rigid, Selective };

/// Tunables for every stage.
struct PipelineParams {
  ScanConfig scan;
  BallParams ball;
  RansacParams goal_ransac;
  GoalParams goal;
  ObstacleParams obstacle;
  RansacParams line_ransac = default_line_ransac();
  LineParams line;

  void validate() const {
    scan.validate();
    ball.validate();
    goal_ransac.validate();
    goal.validate();
    obstacle.validate();
    line_ransac.validate();
    line.validate();
  }
  friend bool operator==(const PipelineParams&, const PipelineParams&) = default;
};

namespace stages {

inline void green_horizon(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  GreenHorizon h = detect_green_horizon(bb.read<Slot::Frame>(), bb.lut(),
                                        bb.read<Slot::Kinematics>(), p.scan);
  bb.post<Slot::HorizonMarkers>(std::move(h.markers), Stage::GreenHorizon);
  bb.post<Slot::HorizonHull>(std::move(h.hull), Stage::GreenHorizon);
}

inline void scanline_classifier(VisionBlackboard& bb, const PipelineParams& p, ControllerMode mode) {
  const auto above = mode == ControllerMode::Rigid ? AboveHullScan::Always
                                                   : AboveHullScan::IfGoalEvidenceBelow;
  bb.post<Slot::Segments>(
      classify_scanlines(bb.read<Slot::Frame>(), bb.lut(), bb.horizon(), p.scan, above),
      Stage::ScanlineClassifier);
}

inline void transition_filter(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  bb.post<Slot::Transitions>(filter_transitions(bb.read<Slot::Segments>(), p.scan.min_segment_length),
                             Stage::TransitionFilter);
}

inline void ball_detection(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  bb.post<Slot::Balls>(detect_ball(bb.read<Slot::Transitions>().ball, bb.read<Slot::Frame>(),
                                   bb.lut(), bb.horizon(), p.ball),
                       Stage::BallDetection);
}

inline void goal_detection(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  bb.post<Slot::Goalposts>(detect_goalposts(bb.read<Slot::Transitions>().goal, p.goal_ransac,
                                            bb.horizon(), bb.read<Slot::Frame>(), bb.lut(), p.goal),
                           Stage::GoalDetection);
}

inline void obstacle_detection(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  bb.post<Slot::Obstacles>(detect_obstacles(bb.horizon(), p.obstacle), Stage::ObstacleDetection);
}

inline void line_detection(VisionBlackboard& bb, const PipelineParams& p, ControllerMode) {
  bb.post<Slot::Lines>(detect_field_lines(bb.read<Slot::Transitions>().line, p.line_ransac, p.line),
                       Stage::LineDetection);
}

inline void run(Stage s, VisionBlackboard& bb, const PipelineParams& p, ControllerMode mode) {
  switch (s) {
    case Stage::GreenHorizon: return green_horizon(bb, p, mode);
    case Stage::ScanlineClassifier: return scanline_classifier(bb, p, mode);
    case Stage::TransitionFilter: return transition_filter(bb, p, mode);
    case Stage::BallDetection: return ball_detection(bb, p, mode);
    case Stage::GoalDetection: return goal_detection(bb, p, mode);
    case Stage::ObstacleDetection: return obstacle_detection(bb, p, mode);
    case Stage::LineDetection: return line_detection(bb, p, mode);
  }
}

}  // namespace stages
}  // namespace fv
