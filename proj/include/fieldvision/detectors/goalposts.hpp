/**
 * @file goalposts.hpp
 *
 * Goal post detection: near-vertical RANSAC edges over goal-rule transitions,
 * then a greedy pairing of neighbouring edges into posts.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/detectors/ransac.hpp"
#include "fieldvision/preprocessing/green_horizon.hpp"
#include "fieldvision/preprocessing/segments.hpp"

namespace fv {

struct GoalParams {
  double max_tilt_deg = 15.0;
  double min_post_width = 4.0;
  double max_post_width_fraction = 1.0 / 3.0;  // of frame width
  int midline_samples = 9;

  void validate() const {
    if (!(max_tilt_deg > 0.0 && max_tilt_deg < 90.0))
      throw InvalidArgument("goal.max_tilt_deg must be in (0, 90)");
    if (!(min_post_width > 0.0)) throw InvalidArgument("goal.min_post_width must be > 0");
    if (!(max_post_width_fraction > 0.0 && max_post_width_fraction <= 1.0))
      throw InvalidArgument("goal.max_post_width_fraction must be in (0, 1]");
    if (midline_samples < 1) throw InvalidArgument("goal.midline_samples must be >= 1");
  }
  friend bool operator==(const GoalParams&, const GoalParams&) = default;
};

struct Goalpost {
  Line2 left_edge;
  Line2 right_edge;
  Point2 base;
  double width = 0.0;

  friend bool operator==(const Goalpost&, const Goalpost&) = default;
};

namespace detail {

struct PostEdge {
  FieldLine model;
  double x_mid = 0.0;
  int y_top = 0;
  int y_bottom = 0;

  double x_at(double y) const { return model.line.x_at(y).value_or(x_mid); }
};

}  // namespace detail

/**
 * Posts must touch the field: a pair is kept only when some goal-rule
 * transition below the green horizon lies between its edges. The base is the
 * lowest such transition or inlier endpoint, pushed down to the horizon if it
 * sits above it.
 */
inline std::vector<Goalpost> detect_goalposts(std::span<const ColourTransition> transitions,
                                              const RansacParams& ransac,
                                              const GreenHorizon& horizon, const Frame& frame,
                                              const ColourLUT& lut,
                                              const GoalParams& params = {}) {
  params.validate();
  const bool any_below = std::any_of(transitions.begin(), transitions.end(), [](const auto& t) {
    return t.region == ScanRegion::BelowHull;
  });
  if (!any_below) return {};

  std::vector<Point2> points;
  points.reserve(transitions.size());
  for (const ColourTransition& t : transitions) points.push_back(t.position);

  const double max_tilt = deg_to_rad(params.max_tilt_deg);
  auto near_vertical = [max_tilt](const Line2& l) { return l.angle_from_vertical() <= max_tilt; };
  const auto models = ransac_lines(points, ransac, near_vertical);

  std::vector<detail::PostEdge> edges;
  for (const FieldLine& m : models) {
    detail::PostEdge e;
    e.model = m;
    e.y_top = std::min(m.first.y, m.second.y);
    e.y_bottom = std::max(m.first.y, m.second.y);
    e.x_mid = m.line.x_at(0.5 * (e.y_top + e.y_bottom)).value_or(m.first.x);
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return a.x_mid < b.x_mid; });

  const double max_width = params.max_post_width_fraction * frame.width();
  std::vector<Goalpost> posts;
  for (std::size_t i = 0; i + 1 < edges.size();) {
    const auto& l = edges[i];
    const auto& r = edges[i + 1];
    const int lo = std::max(l.y_top, r.y_top);
    const int hi = std::min(l.y_bottom, r.y_bottom);
    bool paired = false;
    if (lo <= hi) {
      const double y_ref = 0.5 * (lo + hi);
      const double gap = r.x_at(y_ref) - l.x_at(y_ref);
      if (gap >= params.min_post_width && gap <= max_width) {
        int yellow = 0;
        for (int k = 0; k < params.midline_samples; ++k) {
          const double y = params.midline_samples == 1
                               ? y_ref
                               : lo + (hi - lo) * static_cast<double>(k) / (params.midline_samples - 1);
          const int px = static_cast<int>(std::lround(0.5 * (l.x_at(y) + r.x_at(y))));
          const int py = static_cast<int>(std::lround(y));
          if (frame.contains(px, py) && lut.classify(frame.at(px, py)) == ColourClass::GoalYellow)
            ++yellow;
        }
        if (2 * yellow > params.midline_samples) {
          int base_y = std::max(l.y_bottom, r.y_bottom);
          bool touches_field = false;
          for (const ColourTransition& t : transitions) {
            if (t.region != ScanRegion::BelowHull) continue;
            const double y = t.position.y;
            if (t.position.x >= l.x_at(y) - 1.0 && t.position.x <= r.x_at(y) + 1.0) {
              touches_field = true;
              base_y = std::max(base_y, t.position.y);
            }
          }
          if (touches_field) {
            double bx = 0.5 * (l.x_at(base_y) + r.x_at(base_y));
            const double hull_y = horizon.y_at(bx);
            if (base_y < hull_y) {
              base_y = static_cast<int>(std::ceil(hull_y - 1e-9));
              bx = 0.5 * (l.x_at(base_y) + r.x_at(base_y));
            }
            posts.push_back({l.model.line, r.model.line,
                             {static_cast<int>(std::lround(bx)), base_y},
                             r.x_at(base_y) - l.x_at(base_y)});
            paired = true;
          }
        }
      }
    }
    i += paired ? 2 : 1;
  }
  return posts;
}

}  // namespace fv
