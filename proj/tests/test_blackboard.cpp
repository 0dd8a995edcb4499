#include <gtest/gtest.h>

#include "fieldvision/blackboard/blackboard.hpp"
#include "support.hpp"

using namespace fv;

namespace {

VisionBlackboard fresh() {
  VisionBlackboard bb(default_lut());
  bb.begin_frame(Frame::filled(8, 8, paint::kGreen, 3), KinematicsSnapshot{});
  return bb;
}

}  // namespace

TEST(Blackboard, InputsAreReadableAfterBeginFrame) {
  auto bb = fresh();
  EXPECT_EQ(bb.read<Slot::Frame>().sequence_index(), 3u);
  EXPECT_FALSE(bb.read<Slot::Kinematics>().valid);
  EXPECT_TRUE(bb.readable<Slot::Lut>());
}

TEST(Blackboard, ReadBeforeProductionViolatesContract) {
  auto bb = fresh();
  EXPECT_FALSE(bb.readable<Slot::Segments>());
  EXPECT_THROW(bb.read<Slot::Segments>(), ContractViolation);
  EXPECT_THROW(bb.horizon(), ContractViolation);
}

TEST(Blackboard, OnlyTheProducerMayPost) {
  auto bb = fresh();
  EXPECT_THROW(bb.post<Slot::Segments>(SegmentSet{}, Stage::TransitionFilter), ContractViolation);
  EXPECT_THROW(bb.post<Slot::Frame>(Frame::filled(2, 2, paint::kGreen), Stage::GreenHorizon),
               ContractViolation);
  EXPECT_NO_THROW(bb.post<Slot::Segments>(SegmentSet{}, Stage::ScanlineClassifier));
  EXPECT_TRUE(bb.readable<Slot::Segments>());
}

TEST(Blackboard, DoublePostViolatesContract) {
  auto bb = fresh();
  bb.post<Slot::Balls>({}, Stage::BallDetection);
  EXPECT_THROW(bb.post<Slot::Balls>({}, Stage::BallDetection), ContractViolation);
}

TEST(Blackboard, FailedProducerHidesItsSlot) {
  auto bb = fresh();
  bb.post<Slot::Obstacles>({}, Stage::ObstacleDetection);
  bb.set_status(Stage::ObstacleDetection, StageStatus::Failed);
  EXPECT_FALSE(bb.readable<Slot::Obstacles>());
  EXPECT_THROW(bb.read<Slot::Obstacles>(), ContractViolation);
}

TEST(Blackboard, BeginFrameClearsEverythingButTheLut) {
  auto bb = fresh();
  bb.post<Slot::HorizonMarkers>({{0, 1}}, Stage::GreenHorizon);
  bb.post<Slot::HorizonHull>({{0, 1}, {7, 1}}, Stage::GreenHorizon);
  bb.set_duration(Stage::GreenHorizon, 42);
  EXPECT_EQ(bb.horizon().hull.size(), 2u);
  bb.begin_frame(Frame::filled(4, 4, paint::kGreen, 4), KinematicsSnapshot{});
  EXPECT_FALSE(bb.readable<Slot::HorizonHull>());
  EXPECT_EQ(bb.status(Stage::GreenHorizon), StageStatus::NotRun);
  EXPECT_FALSE(bb.duration_ns(Stage::GreenHorizon).has_value());
  EXPECT_TRUE(bb.readable<Slot::Lut>());
  EXPECT_EQ(bb.read<Slot::Frame>().sequence_index(), 4u);
}

TEST(Blackboard, NullLutIsRejected) {
  VisionBlackboard bb;
  EXPECT_THROW(bb.set_lut(nullptr), ContractViolation);
  EXPECT_THROW(bb.lut(), ContractViolation);
}

TEST(Blackboard, SlotNamesAreStable) {
  EXPECT_EQ(SlotTraits<Slot::HorizonHull>::name, "horizon.hull");
  EXPECT_EQ(SlotTraits<Slot::Balls>::name, "results.balls");
  EXPECT_EQ(*SlotTraits<Slot::Lines>::producer, Stage::LineDetection);
  EXPECT_FALSE(SlotTraits<Slot::Frame>::producer.has_value());
}

TEST(Stages, NamesAndDependencies) {
  for (Stage s : kStageOrder) EXPECT_EQ(parse_stage(stage_name(s)), s);
  EXPECT_FALSE(parse_stage("colour-classifier").has_value());
  EXPECT_TRUE(depends_on(Stage::BallDetection, Stage::GreenHorizon));
  EXPECT_FALSE(depends_on(Stage::ObstacleDetection, Stage::ScanlineClassifier));
  EXPECT_FALSE(stage_prerequisite(Stage::GreenHorizon).has_value());
}
