#include <gtest/gtest.h>

#include <random>

#include "fieldvision/preprocessing/green_horizon.hpp"
#include "support.hpp"

using namespace fv;
using fvtest::paint_rect;

namespace {

// Oracle: a point is on the upper hull iff no chord between two other points
// passes strictly above it (smaller y) at its x.
std::vector<Point2> brute_upper_hull(const std::vector<Point2>& pts) {
  std::vector<Point2> out;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    bool keep = true;
    for (std::size_t i = 0; i < k && keep; ++i)
      for (std::size_t j = k + 1; j < pts.size() && keep; ++j) {
        const double t = (pts[k].x - pts[i].x) / static_cast<double>(pts[j].x - pts[i].x);
        const double chord = pts[i].y + t * (pts[j].y - pts[i].y);
        if (chord <= pts[k].y + 1e-9) keep = false;
      }
    if (keep) out.push_back(pts[k]);
  }
  return out;
}

KinematicsSnapshot no_kinematics() { return {}; }

}  // namespace

TEST(UpperHull, ConvexTriangleKeepsAllPoints) {
  const std::vector<Point2> pts = {{0, 50}, {8, 20}, {16, 52}};
  EXPECT_EQ(upper_hull(pts), pts);
}

TEST(UpperHull, DipIsDropped) {
  const std::vector<Point2> pts = {{0, 50}, {8, 80}, {16, 52}};
  EXPECT_EQ(upper_hull(pts), (std::vector<Point2>{{0, 50}, {16, 52}}));
}

TEST(UpperHull, CollinearInteriorPointsAreDropped) {
  const std::vector<Point2> pts = {{0, 10}, {5, 10}, {10, 10}};
  EXPECT_EQ(upper_hull(pts), (std::vector<Point2>{{0, 10}, {10, 10}}));
}

TEST(UpperHull, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uniform_int_distribution<int> n_dist(1, 40), y(0, 200);
    const int n = n_dist(rng);
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) pts.push_back({i * 8, y(rng)});
    const auto hull = upper_hull(pts);
    ASSERT_EQ(hull, brute_upper_hull(pts)) << "trial " << trial;
    // Every input point lies on or below the hull.
    for (const Point2& p : pts) ASSERT_GE(p.y + 1e-9, hull_y_at(hull, p.x));
    for (std::size_t i = 1; i < hull.size(); ++i) ASSERT_LT(hull[i - 1].x, hull[i].x);
  }
}

TEST(HullInterpolation, ClampsAndInterpolates) {
  const std::vector<Point2> hull = {{0, 10}, {10, 30}};
  EXPECT_DOUBLE_EQ(hull_y_at(hull, -5), 10);
  EXPECT_DOUBLE_EQ(hull_y_at(hull, 5), 20);
  EXPECT_DOUBLE_EQ(hull_y_at(hull, 50), 30);
}

TEST(GreenHorizon, FlatFieldEdge) {
  Frame f = Frame::filled(64, 48, fvtest::kBackgroundForTests);
  paint_rect(f, 0, 20, 63, 47, paint::kGreen);
  const auto h = detect_green_horizon(f, *default_lut(), no_kinematics(), ScanConfig{});
  ASSERT_EQ(h.markers.size(), 8u);
  for (const Point2& m : h.markers) EXPECT_EQ(m.y, 20);
  EXPECT_EQ(h.hull.front().x, 0);
  EXPECT_EQ(h.hull.back().x, 63);
  EXPECT_EQ(h.top_row(40), 20);
}

TEST(GreenHorizon, ShortGreenRunsAreIgnored) {
  Frame f = Frame::filled(16, 48, fvtest::kBackgroundForTests);
  paint_rect(f, 0, 5, 15, 6, paint::kGreen);  // two rows only
  paint_rect(f, 0, 30, 15, 47, paint::kGreen);
  const auto h = detect_green_horizon(f, *default_lut(), no_kinematics(), ScanConfig{});
  for (const Point2& m : h.markers) EXPECT_EQ(m.y, 30);
}

TEST(GreenHorizon, NoFieldGivesBottomMarkers) {
  const Frame f = Frame::filled(16, 20, fvtest::kBackgroundForTests);
  const auto h = detect_green_horizon(f, *default_lut(), no_kinematics(), ScanConfig{});
  for (const Point2& m : h.markers) EXPECT_EQ(m.y, 19);
}

TEST(GreenHorizon, KinematicHorizonSkipsGreenAboveIt) {
  Frame f = Frame::filled(32, 100, fvtest::kBackgroundForTests);
  paint_rect(f, 0, 10, 31, 20, paint::kGreen);  // a green banner above the horizon
  paint_rect(f, 0, 60, 31, 99, paint::kGreen);
  KinematicsSnapshot k;
  k.valid = true;
  k.horizon = Line2::through(0, 40, 31, 40);
  const auto h = detect_green_horizon(f, *default_lut(), k, ScanConfig{});
  for (const Point2& m : h.markers) EXPECT_EQ(m.y, 60);
  const auto h2 = detect_green_horizon(f, *default_lut(), no_kinematics(), ScanConfig{});
  for (const Point2& m : h2.markers) EXPECT_EQ(m.y, 10);
}

TEST(GreenHorizon, HullBridgesAnOccludingObject) {
  Frame f = Frame::filled(200, 120, fvtest::kBackgroundForTests);
  paint_rect(f, 0, 40, 199, 119, paint::kGreen);
  paint_rect(f, 80, 20, 119, 90, paint::kObstacle);  // robot standing on the field
  const auto h = detect_green_horizon(f, *default_lut(), no_kinematics(), ScanConfig{});
  for (int x = 0; x < 200; ++x) EXPECT_NEAR(h.y_at(x), 40.0, 1e-9);
  int dropped = 0;
  for (const Point2& m : h.markers) dropped += m.y > 40;
  EXPECT_EQ(dropped, 5);
}

TEST(GreenHorizon, CostIsLinearInWidth) {
  // Pixels examined per column do not depend on the frame width.
  auto cost = [](int w) {
    Frame f = Frame::filled(w, 120, fvtest::kBackgroundForTests);
    paint_rect(f, 0, 50, w - 1, 119, paint::kGreen);
    return detect_green_horizon(f, *default_lut(), KinematicsSnapshot{}, ScanConfig{}).pixels_examined;
  };
  const auto c1 = cost(160), c2 = cost(320), c4 = cost(640);
  EXPECT_EQ(c2, 2 * c1);
  EXPECT_EQ(c4, 4 * c1);
}

TEST(GreenHorizon, OcclusionOfMinorityOfScansLeavesHullNearTruth) {
  // Objects covering fewer than a third of the scans never pull the hull
  // below the true field edge by more than the slope between neighbours.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Frame f = Frame::filled(320, 240, fvtest::kBackgroundForTests);
    paint_rect(f, 0, 80, 319, 239, paint::kGreen);
    std::uniform_int_distribution<int> x0(16, 200), w(8, 80);
    const int ox = x0(rng), ow = w(rng);
    paint_rect(f, ox, 30, ox + ow, 200, paint::kObstacle);
    const auto h = detect_green_horizon(f, *default_lut(), KinematicsSnapshot{}, ScanConfig{});
    for (int x = 0; x < 320; ++x) ASSERT_NEAR(h.y_at(x), 80.0, 1e-9) << trial;
  }
}
