#pragma once

#include <vector>

#include "fieldvision/preprocessing/green_horizon.hpp"

namespace fv {

struct ObstacleParams {
  int alpha = 3;         // minimum consecutive off-hull scans
  double min_drop = 5.0; // pixels below the hull for a marker to count as off-hull

  void validate() const {
    if (alpha < 1) throw InvalidArgument("obstacle.alpha must be >= 1");
    if (!(min_drop >= 0.0)) throw InvalidArgument("obstacle.min_drop must be >= 0");
  }
  friend bool operator==(const ObstacleParams&, const ObstacleParams&) = default;
};

struct Obstacle {
  int left_x = 0;
  int right_x = 0;
  Point2 base;  // lowest marker of the run
  int scan_count = 0;
  int first_scan = 0;  // index of the leftmost scanline in the run

  friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

inline bool is_off_hull(const GreenHorizon& horizon, Point2 marker, double min_drop) {
  return marker.y - horizon.y_at(marker.x) >= min_drop;
}

/// Maximal runs of at least alpha consecutive off-hull markers.
inline std::vector<Obstacle> detect_obstacles(const GreenHorizon& horizon,
                                              const ObstacleParams& params = {}) {
  params.validate();
  std::vector<Obstacle> out;
  const auto& m = horizon.markers;
  std::size_t i = 0;
  while (i < m.size()) {
    if (!is_off_hull(horizon, m[i], params.min_drop)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    Point2 base = m[i];
    while (j + 1 < m.size() && is_off_hull(horizon, m[j + 1], params.min_drop)) {
      ++j;
      if (m[j].y > base.y) base = m[j];
    }
    const int count = static_cast<int>(j - i + 1);
    if (count >= params.alpha)
      out.push_back({m[i].x, m[j].x, base, count, static_cast<int>(i)});
    i = j + 1;
  }
  return out;
}

}  // namespace fv
