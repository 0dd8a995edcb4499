#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fv {

/// The seven processing stages, in the order the controller runs them.
enum class Stage : std::uint8_t {
  GreenHorizon = 0,
  ScanlineClassifier,
  TransitionFilter,
  BallDetection,
  GoalDetection,
  ObstacleDetection,
  LineDetection,
};

inline constexpr std::size_t kStageCount = 7;

inline constexpr std::array<Stage, kStageCount> kStageOrder = {
    Stage::GreenHorizon,   Stage::ScanlineClassifier, Stage::TransitionFilter,
    Stage::BallDetection,  Stage::GoalDetection,      Stage::ObstacleDetection,
    Stage::LineDetection};

constexpr std::size_t stage_index(Stage s) { return static_cast<std::size_t>(s); }

constexpr std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::GreenHorizon: return "green-horizon";
    case Stage::ScanlineClassifier: return "scanline-classifier";
    case Stage::TransitionFilter: return "transition-filter";
    case Stage::BallDetection: return "ball-detection";
    case Stage::GoalDetection: return "goal-detection";
    case Stage::ObstacleDetection: return "obstacle-detection";
    case Stage::LineDetection: return "line-detection";
  }
  return "unknown";
}

constexpr std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : kStageOrder)
    if (stage_name(s) == name) return s;
  return std::nullopt;
}

/// Direct prerequisite of each stage; nullopt for the root.
constexpr std::optional<Stage> stage_prerequisite(Stage s) {
  switch (s) {
    case Stage::GreenHorizon: return std::nullopt;
    case Stage::ScanlineClassifier: return Stage::GreenHorizon;
    case Stage::TransitionFilter: return Stage::ScanlineClassifier;
    case Stage::BallDetection: return Stage::TransitionFilter;
    case Stage::GoalDetection: return Stage::TransitionFilter;
    case Stage::ObstacleDetection: return Stage::GreenHorizon;
    case Stage::LineDetection: return Stage::TransitionFilter;
  }
  return std::nullopt;
}

/// True when `s` depends on `on`, directly or transitively.
constexpr bool depends_on(Stage s, Stage on) {
  for (auto p = stage_prerequisite(s); p; p = stage_prerequisite(*p))
    if (*p == on) return true;
  return false;
}

enum class StageStatus : std::uint8_t { NotRun, Suppressed, Ok, Failed };

constexpr std::string_view status_name(StageStatus s) {
  switch (s) {
    case StageStatus::NotRun: return "not-run";
    case StageStatus::Suppressed: return "suppressed";
    case StageStatus::Ok: return "ok";
    case StageStatus::Failed: return "failed";
  }
  return "not-run";
}

constexpr std::optional<StageStatus> parse_status(std::string_view name) {
  for (auto s : {StageStatus::NotRun, StageStatus::Suppressed, StageStatus::Ok, StageStatus::Failed})
    if (status_name(s) == name) return s;
  return std::nullopt;
}

}  // namespace fv
