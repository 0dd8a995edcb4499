/**
 * @file ball.hpp
 *
 * Ball detection. The candidate centre is the centroid of all ball-rule
 * transitions below the green horizon. Four cardinal rays are then cast from
 * it; each ray stops where the orange run ends, and an edge counts as
 * occluded when the ray stops on anything other than field or line colour
 * (or leaves the frame). The circle is recovered from the unoccluded edge
 * points, and the rays are recast once from the refined centre.
 */

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/preprocessing/green_horizon.hpp"
#include "fieldvision/preprocessing/segments.hpp"

namespace fv {

enum class BallEdge : std::uint8_t { Top = 0, Bottom = 1, Left = 2, Right = 3 };

inline constexpr std::array<BallEdge, 4> kBallEdges = {BallEdge::Top, BallEdge::Bottom,
                                                       BallEdge::Left, BallEdge::Right};

constexpr std::string_view edge_name(BallEdge e) {
  switch (e) {
    case BallEdge::Top: return "top";
    case BallEdge::Bottom: return "bottom";
    case BallEdge::Left: return "left";
    case BallEdge::Right: return "right";
  }
  return "top";
}

struct BallParams {
  double min_radius = 2.0;
  int gap_tolerance = 2;    // non-orange pixels a ray may skip inside the ball
  int seed_search = 8;      // radius searched for an orange pixel near the centroid

  void validate() const {
    if (!(min_radius > 0.0)) throw InvalidArgument("ball.min_radius must be > 0");
    if (gap_tolerance < 0) throw InvalidArgument("ball.gap_tolerance must be >= 0");
    if (seed_search < 0) throw InvalidArgument("ball.seed_search must be >= 0");
  }
  friend bool operator==(const BallParams&, const BallParams&) = default;
};

struct BallDetection {
  Point2 centre;
  double radius = 0.0;
  std::array<bool, 4> occluded{};  // indexed by BallEdge
  int support = 0;

  bool is_occluded(BallEdge e) const { return occluded[static_cast<std::size_t>(e)]; }
  friend bool operator==(const BallDetection&, const BallDetection&) = default;
};

namespace detail {

struct RayHit {
  double length = 0.0;  // from the origin to the edge (pixel boundary)
  bool in_frame = false;
  bool occluded = true;
};

inline std::pair<int, int> edge_step(BallEdge e) {
  switch (e) {
    case BallEdge::Top: return {0, -1};
    case BallEdge::Bottom: return {0, 1};
    case BallEdge::Left: return {-1, 0};
    case BallEdge::Right: return {1, 0};
  }
  return {0, 0};
}

inline RayHit cast_ray(const Frame& frame, const ColourLUT& lut, Point2 origin, BallEdge e,
                       int gap_tolerance) {
  const auto [dx, dy] = edge_step(e);
  int last_orange = 0;
  ColourClass terminal = ColourClass::Unclassified;
  for (int step = 1;; ++step) {
    const int x = origin.x + dx * step;
    const int y = origin.y + dy * step;
    if (!frame.contains(x, y)) {
      if (step == last_orange + 1) return {last_orange + 0.5, false, true};
      break;
    }
    const ColourClass c = lut.classify(frame.at(x, y));
    if (c == ColourClass::BallOrange) {
      last_orange = step;
      continue;
    }
    if (step == last_orange + 1) terminal = c;
    // Short interruptions inside the ball (noise, colour bleed) are skipped.
    if (step - last_orange > gap_tolerance) break;
  }
  const bool clean = terminal == ColourClass::FieldGreen || terminal == ColourClass::LineWhite;
  return {last_orange + 0.5, true, !clean};
}

struct Circle {
  double cx = 0.0, cy = 0.0, r = 0.0;
};

inline std::optional<Circle> circumcircle(double ax, double ay, double bx, double by, double cx,
                                          double cy) {
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::fabs(d) < 1e-9) return std::nullopt;
  const double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  const double uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  return Circle{ux, uy, std::hypot(ax - ux, ay - uy)};
}

struct RayFit {
  Circle circle;
  std::array<bool, 4> occluded{};
  int in_frame = 0;
};

inline RayFit fit_from_rays(const Frame& frame, const ColourLUT& lut, Point2 origin,
                            int gap_tolerance) {
  RayFit fit;
  std::array<RayHit, 4> hits;
  std::array<std::pair<double, double>, 4> edge{};
  for (BallEdge e : kBallEdges) {
    const auto i = static_cast<std::size_t>(e);
    hits[i] = cast_ray(frame, lut, origin, e, gap_tolerance);
    fit.occluded[i] = hits[i].occluded;
    if (hits[i].in_frame) ++fit.in_frame;
    const auto [dx, dy] = edge_step(e);
    edge[i] = {origin.x + dx * hits[i].length, origin.y + dy * hits[i].length};
  }
  auto clean = [&](BallEdge e) { return !fit.occluded[static_cast<std::size_t>(e)]; };
  auto pt = [&](BallEdge e) { return edge[static_cast<std::size_t>(e)]; };
  const bool top = clean(BallEdge::Top), bottom = clean(BallEdge::Bottom);
  const bool left = clean(BallEdge::Left), right = clean(BallEdge::Right);
  const int clean_count = top + bottom + left + right;

  if (clean_count == 4) {
    // Chord midpoints give the centre exactly; each chord then gives a radius.
    const double cx = 0.5 * (pt(BallEdge::Left).first + pt(BallEdge::Right).first);
    const double cy = 0.5 * (pt(BallEdge::Top).second + pt(BallEdge::Bottom).second);
    const double hh = 0.5 * (pt(BallEdge::Right).first - pt(BallEdge::Left).first);
    const double hv = 0.5 * (pt(BallEdge::Bottom).second - pt(BallEdge::Top).second);
    const double rh = std::hypot(hh, origin.y - cy);
    const double rv = std::hypot(hv, origin.x - cx);
    fit.circle = {cx, cy, 0.5 * (rh + rv)};
    return fit;
  }
  if (clean_count == 3) {
    std::vector<std::pair<double, double>> p;
    for (BallEdge e : kBallEdges)
      if (clean(e)) p.push_back(pt(e));
    if (auto c = circumcircle(p[0].first, p[0].second, p[1].first, p[1].second, p[2].first,
                              p[2].second)) {
      fit.circle = *c;
      return fit;
    }
  }
  if (left && right && !(top && bottom)) {
    const double cx = 0.5 * (pt(BallEdge::Left).first + pt(BallEdge::Right).first);
    fit.circle = {cx, static_cast<double>(origin.y),
                  0.5 * (pt(BallEdge::Right).first - pt(BallEdge::Left).first)};
    return fit;
  }
  if (top && bottom && !(left && right)) {
    const double cy = 0.5 * (pt(BallEdge::Top).second + pt(BallEdge::Bottom).second);
    fit.circle = {static_cast<double>(origin.x), cy,
                  0.5 * (pt(BallEdge::Bottom).second - pt(BallEdge::Top).second)};
    return fit;
  }
  // Too little clean evidence: keep the candidate and take the longest ray
  // that ended inside the frame.
  double longest = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    if (hits[i].in_frame) longest = std::max(longest, hits[i].length);
  fit.circle = {static_cast<double>(origin.x), static_cast<double>(origin.y), longest};
  return fit;
}

inline std::optional<Point2> find_orange_near(const Frame& frame, const ColourLUT& lut, Point2 c,
                                              int radius) {
  for (int r = 0; r <= radius; ++r)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        if (std::max(std::abs(dx), std::abs(dy)) != r) continue;
        const int x = c.x + dx, y = c.y + dy;
        if (frame.contains(x, y) && lut.classify(frame.at(x, y)) == ColourClass::BallOrange)
          return Point2{x, y};
      }
  return std::nullopt;
}

inline Point2 round_point(double x, double y) {
  return {static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))};
}

}  // namespace detail

/// Centroid of the ball-rule transitions that lie below the green horizon.
inline std::optional<Point2> ball_candidate(std::span<const ColourTransition> transitions,
                                            int* support = nullptr) {
  double sx = 0.0, sy = 0.0;
  int n = 0;
  for (const ColourTransition& t : transitions) {
    if (t.region != ScanRegion::BelowHull) continue;
    sx += t.position.x;
    sy += t.position.y;
    ++n;
  }
  if (support) *support = n;
  if (n < 2) return std::nullopt;
  return detail::round_point(sx / n, sy / n);
}

/// Returns zero or one ball.
inline std::vector<BallDetection> detect_ball(std::span<const ColourTransition> transitions,
                                              const Frame& frame, const ColourLUT& lut,
                                              const GreenHorizon& horizon,
                                              const BallParams& params = {}) {
  params.validate();
  (void)horizon;  // transitions already carry their hull region
  int support = 0;
  const auto candidate = ball_candidate(transitions, &support);
  if (!candidate) return {};
  auto seed = detail::find_orange_near(frame, lut, *candidate, params.seed_search);
  if (!seed) return {};

  detail::RayFit fit = detail::fit_from_rays(frame, lut, *seed, params.gap_tolerance);
  const Point2 refined = detail::round_point(fit.circle.cx, fit.circle.cy);
  if (frame.contains(refined) && lut.classify(frame.at(refined.x, refined.y)) == ColourClass::BallOrange)
    fit = detail::fit_from_rays(frame, lut, refined, params.gap_tolerance);

  if (fit.in_frame < 2 || !(fit.circle.r >= params.min_radius)) return {};
  const Point2 centre = detail::round_point(fit.circle.cx, fit.circle.cy);
  if (!frame.contains(centre)) return {};
  return {BallDetection{centre, fit.circle.r, fit.occluded, support}};
}

}  // namespace fv
