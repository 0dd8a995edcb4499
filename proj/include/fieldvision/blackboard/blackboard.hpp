/**
 * @file blackboard.hpp
 *
 * Per-pipeline store for the current frame's inputs, intermediate products
 * and results. Every slot declares the stage that produces it; reading a slot
 * before its producer has posted successfully, or posting from the wrong
 * stage, raises ContractViolation.
 */

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fieldvision/blackboard/stage.hpp"
#include "fieldvision/core/lut.hpp"
#include "fieldvision/core/types.hpp"
#include "fieldvision/detectors/ball.hpp"
#include "fieldvision/detectors/goalposts.hpp"
#include "fieldvision/detectors/obstacles.hpp"
#include "fieldvision/detectors/ransac.hpp"
#include "fieldvision/preprocessing/green_horizon.hpp"
#include "fieldvision/preprocessing/segments.hpp"

namespace fv {

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class Slot : std::uint8_t {
  Frame = 0,
  Kinematics,
  Lut,
  HorizonMarkers,
  HorizonHull,
  Segments,
  Transitions,
  Balls,
  Goalposts,
  Obstacles,
  Lines,
};

inline constexpr std::size_t kSlotCount = 11;

template <Slot S>
struct SlotTraits;

#define FV_DECLARE_SLOT(slot, type, label, producer_stage)              \
  template <>                                                           \
  struct SlotTraits<Slot::slot> {                                       \
    using value_type = type;                                            \
    static constexpr std::string_view name = label;                     \
    static constexpr std::optional<Stage> producer = producer_stage;    \
  };

FV_DECLARE_SLOT(Frame, Frame, "frame", std::nullopt)
FV_DECLARE_SLOT(Kinematics, KinematicsSnapshot, "kinematics", std::nullopt)
FV_DECLARE_SLOT(Lut, std::shared_ptr<const ColourLUT>, "lut", std::nullopt)
FV_DECLARE_SLOT(HorizonMarkers, std::vector<Point2>, "horizon.markers", Stage::GreenHorizon)
FV_DECLARE_SLOT(HorizonHull, std::vector<Point2>, "horizon.hull", Stage::GreenHorizon)
FV_DECLARE_SLOT(Segments, SegmentSet, "segments", Stage::ScanlineClassifier)
FV_DECLARE_SLOT(Transitions, TransitionSet, "transitions", Stage::TransitionFilter)
FV_DECLARE_SLOT(Balls, std::vector<BallDetection>, "results.balls", Stage::BallDetection)
FV_DECLARE_SLOT(Goalposts, std::vector<Goalpost>, "results.goalposts", Stage::GoalDetection)
FV_DECLARE_SLOT(Obstacles, std::vector<Obstacle>, "results.obstacles", Stage::ObstacleDetection)
FV_DECLARE_SLOT(Lines, std::vector<FieldLine>, "results.lines", Stage::LineDetection)

#undef FV_DECLARE_SLOT

template <Slot S>
using slot_value_t = typename SlotTraits<S>::value_type;

class VisionBlackboard {
 public:
  VisionBlackboard() { reset_frame_state(); }
  explicit VisionBlackboard(std::shared_ptr<const ColourLUT> lut) : VisionBlackboard() {
    set_lut(std::move(lut));
  }

  VisionBlackboard(const VisionBlackboard&) = delete;
  VisionBlackboard& operator=(const VisionBlackboard&) = delete;
  VisionBlackboard(VisionBlackboard&&) = default;
  VisionBlackboard& operator=(VisionBlackboard&&) = default;

  /// The LUT survives begin_frame.
  void set_lut(std::shared_ptr<const ColourLUT> lut) {
    if (!lut) throw ContractViolation("blackboard: lut must not be null");
    std::get<static_cast<std::size_t>(Slot::Lut)>(slots_) = std::move(lut);
  }

  /// Clears every per-frame slot and the status ledger, then fills the
  /// frame and kinematics input slots.
  void begin_frame(Frame frame, KinematicsSnapshot kinematics) {
    reset_frame_state();
    std::get<static_cast<std::size_t>(Slot::Frame)>(slots_) = std::move(frame);
    std::get<static_cast<std::size_t>(Slot::Kinematics)>(slots_) = std::move(kinematics);
  }

  template <Slot S>
  void post(slot_value_t<S> value, Stage producer) {
    using T = SlotTraits<S>;
    if (!T::producer)
      throw ContractViolation("blackboard: input slot '" + std::string(T::name) +
                              "' cannot be posted by stage '" + std::string(stage_name(producer)) + "'");
    if (*T::producer != producer)
      throw ContractViolation("blackboard: stage '" + std::string(stage_name(producer)) +
                              "' may not post slot '" + std::string(T::name) + "' (producer is '" +
                              std::string(stage_name(*T::producer)) + "')");
    auto& slot = std::get<static_cast<std::size_t>(S)>(slots_);
    if (slot)
      throw ContractViolation("blackboard: slot '" + std::string(T::name) +
                              "' was already posted this frame");
    slot = std::move(value);
    statuses_[stage_index(producer)] = StageStatus::Ok;
  }

  template <Slot S>
  bool readable() const {
    using T = SlotTraits<S>;
    const auto& slot = std::get<static_cast<std::size_t>(S)>(slots_);
    if (!slot) return false;
    return !T::producer || statuses_[stage_index(*T::producer)] == StageStatus::Ok;
  }

  template <Slot S>
  const slot_value_t<S>& read() const {
    using T = SlotTraits<S>;
    const auto& slot = std::get<static_cast<std::size_t>(S)>(slots_);
    if (!T::producer) {
      if (!slot)
        throw ContractViolation("blackboard: input slot '" + std::string(T::name) +
                                "' has not been filled");
      return *slot;
    }
    const StageStatus status = statuses_[stage_index(*T::producer)];
    if (status != StageStatus::Ok || !slot)
      throw ContractViolation("blackboard: slot '" + std::string(T::name) + "' read before stage '" +
                              std::string(stage_name(*T::producer)) + "' produced it (status " +
                              std::string(status_name(status)) + ")");
    return *slot;
  }

  /// Markers and hull combined.
  GreenHorizon horizon() const {
    GreenHorizon h;
    h.markers = read<Slot::HorizonMarkers>();
    h.hull = read<Slot::HorizonHull>();
    return h;
  }

  const ColourLUT& lut() const { return *read<Slot::Lut>(); }

  StageStatus status(Stage s) const { return statuses_[stage_index(s)]; }
  void set_status(Stage s, StageStatus status) { statuses_[stage_index(s)] = status; }

  std::optional<std::int64_t> duration_ns(Stage s) const { return durations_[stage_index(s)]; }
  void set_duration(Stage s, std::int64_t ns) { durations_[stage_index(s)] = ns; }

 private:
  using Storage = std::tuple<std::optional<Frame>, std::optional<KinematicsSnapshot>,
                             std::optional<std::shared_ptr<const ColourLUT>>,
                             std::optional<std::vector<Point2>>, std::optional<std::vector<Point2>>,
                             std::optional<SegmentSet>, std::optional<TransitionSet>,
                             std::optional<std::vector<BallDetection>>,
                             std::optional<std::vector<Goalpost>>,
                             std::optional<std::vector<Obstacle>>,
                             std::optional<std::vector<FieldLine>>>;
  static_assert(std::tuple_size_v<Storage> == kSlotCount);

  template <std::size_t... I>
  void clear_slots(std::index_sequence<I...>) {
    ((I == static_cast<std::size_t>(Slot::Lut) ? void() : std::get<I>(slots_).reset()), ...);
  }

  void reset_frame_state() {
    clear_slots(std::make_index_sequence<kSlotCount>{});
    statuses_.fill(StageStatus::NotRun);
    durations_.fill(std::nullopt);
  }

  Storage slots_;
  std::array<StageStatus, kStageCount> statuses_{};
  std::array<std::optional<std::int64_t>, kStageCount> durations_{};
};

}  // namespace fv
