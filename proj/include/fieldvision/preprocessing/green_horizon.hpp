/**
 * @file green_horizon.hpp
 *
 * Green horizon detection: vertical scanlines find where the field starts in
 * each column, and the upper convex hull of those markers is the boundary
 * between the field and everything above it.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/core/types.hpp"

namespace fv {

struct ScanConfig {
  int vertical_spacing = 8;
  int horizontal_spacing = 8;
  int min_green_run = 3;
  int min_segment_length = 2;

  void validate() const {
    if (vertical_spacing < 1) throw InvalidArgument("scan.vertical_spacing must be >= 1");
    if (horizontal_spacing < 1) throw InvalidArgument("scan.horizontal_spacing must be >= 1");
    if (min_green_run < 1) throw InvalidArgument("scan.min_green_run must be >= 1");
    if (min_segment_length < 1) throw InvalidArgument("scan.min_segment_length must be >= 1");
  }

  friend bool operator==(const ScanConfig&, const ScanConfig&) = default;
};

/// z component of (b - a) x (c - a) in image coordinates.
inline long long cross(Point2 a, Point2 b, Point2 c) {
  return static_cast<long long>(b.x - a.x) * (c.y - a.y) -
         static_cast<long long>(b.y - a.y) * (c.x - a.x);
}

/**
 * Upper hull (smallest y, i.e. visually topmost) of points already sorted by
 * strictly increasing x, via a single monotone-chain pass. Collinear
 * interior points are dropped.
 */
inline std::vector<Point2> upper_hull(std::span<const Point2> sorted_points) {
  std::vector<Point2> hull;
  hull.reserve(sorted_points.size());
  for (const Point2& p : sorted_points) {
    // With y pointing down, a non-positive cross product means the middle
    // point is on or below the chord.
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

/// Piecewise-linear interpolation of a hull at column x, clamped to the
/// hull's end heights outside its x range.
inline double hull_y_at(std::span<const Point2> hull, double x) {
  if (hull.empty()) return 0.0;
  if (x <= hull.front().x) return hull.front().y;
  if (x >= hull.back().x) return hull.back().y;
  auto it = std::upper_bound(hull.begin(), hull.end(), x,
                             [](double v, const Point2& p) { return v < p.x; });
  const Point2& r = *it;
  const Point2& l = *(it - 1);
  const double t = (x - l.x) / static_cast<double>(r.x - l.x);
  return l.y + t * (r.y - l.y);
}

struct GreenHorizon {
  std::vector<Point2> markers;  // one per vertical scanline, increasing x
  std::vector<Point2> hull;     // upper hull of markers plus edge anchors
  std::size_t pixels_examined = 0;

  double y_at(double x) const { return hull_y_at(hull, x); }

  /// First field row of column x.
  int top_row(int x) const { return static_cast<int>(std::ceil(y_at(x) - 1e-9)); }

  friend bool operator==(const GreenHorizon&, const GreenHorizon&) = default;
};

/// Adds horizontal anchors at x = 0 and x = width - 1 and takes the hull.
inline std::vector<Point2> horizon_hull(std::span<const Point2> markers, int width) {
  if (markers.empty()) return {{0, 0}, {width - 1, 0}};
  std::vector<Point2> chain;
  chain.reserve(markers.size() + 2);
  if (markers.front().x > 0) chain.push_back({0, markers.front().y});
  chain.insert(chain.end(), markers.begin(), markers.end());
  if (markers.back().x < width - 1) chain.push_back({width - 1, markers.back().y});
  return upper_hull(chain);
}

/**
 * For each vertical scanline the marker is the first pixel at or below the
 * kinematic horizon that starts a run of at least min_green_run field-green
 * pixels. Columns without such a run get a bottom-edge marker.
 */
inline GreenHorizon detect_green_horizon(const Frame& frame, const ColourLUT& lut,
                                         const KinematicsSnapshot& kinematics,
                                         const ScanConfig& config) {
  config.validate();
  GreenHorizon out;
  const int w = frame.width();
  const int h = frame.height();
  out.markers.reserve(static_cast<std::size_t>(w / config.vertical_spacing + 1));
  for (int x = 0; x < w; x += config.vertical_spacing) {
    int marker = h - 1;
    int run = 0;
    for (int y = horizon_start_row(kinematics, x, h); y < h; ++y) {
      ++out.pixels_examined;
      if (lut.classify(frame.at(x, y)) == ColourClass::FieldGreen) {
        if (++run >= config.min_green_run) {
          marker = y - run + 1;
          break;
        }
      } else {
        run = 0;
      }
    }
    out.markers.push_back({x, marker});
  }
  out.hull = horizon_hull(out.markers, w);
  return out;
}

}  // namespace fv
