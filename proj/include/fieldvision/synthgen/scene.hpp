/**
 * @file scene.hpp
 *
 * Synthetic field scenes with exact ground truth. Objects are painted in a
 * fixed z-order (clutter, field, lines, posts, ball and its occluder,
 * obstacles) using paint colours that classify exactly under the default
 * rules, then optional per-pixel class-flip noise is applied.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/core/types.hpp"

namespace fv::synth {

inline constexpr Pixel kBackground{120, 150, 110};

/// Linear field boundary: y(x) interpolates left_y at x = 0 and right_y at
/// x = width - 1.
struct HorizonProfile {
  double left_y = 120.0;
  double right_y = 120.0;

  double y_at(double x, int width) const {
    return left_y + (right_y - left_y) * x / static_cast<double>(width - 1);
  }
  /// First green row of column x.
  int field_top(int x, int width) const {
    return static_cast<int>(std::ceil(y_at(x, width) - 1e-9));
  }
};

enum class Side : std::uint8_t { Left, Right, Top, Bottom };

inline std::string side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "left";
}

inline std::optional<Side> parse_side(const std::string& s) {
  for (Side v : {Side::Left, Side::Right, Side::Top, Side::Bottom})
    if (side_name(v) == s) return v;
  return std::nullopt;
}

struct BallSpec {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 10.0;
  double occlusion = 0.0;  // fraction of the diameter covered, in [0, 0.6]
  Side occluded_side = Side::Left;
  Pixel occluder = paint::kObstacle;
};

struct PostSpec {
  int x = 0;      // leftmost column
  int width = 16;
  int top_y = 0;
  int base_y = 0; // last yellow row
};

struct ObstacleSpec {
  int x0 = 0;
  int x1 = 0;
  int top_y = 0;
  int base_y = 0;
};

struct LineSpec {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  double width = 4.0;
};

struct ClutterRect {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  Pixel colour = kBackground;
};

struct KinematicsSpec {
  double margin = 0.0;  // kinematic horizon sits this many rows above the field boundary
  double pitch = 0.0;
  double height = 0.0;
};

struct SceneSpec {
  int width = 640;
  int height = 480;
  HorizonProfile horizon;
  std::optional<BallSpec> ball;
  std::vector<PostSpec> posts;
  std::vector<ObstacleSpec> obstacles;
  std::vector<LineSpec> lines;
  std::vector<ClutterRect> clutter;
  double flip_probability = 0.0;
  std::optional<KinematicsSpec> kinematics;
  std::uint64_t seed = 1;
};

struct BallTruth {
  double cx = 0.0, cy = 0.0, radius = 0.0, occlusion = 0.0;
  Side occluded_side = Side::Left;
};

struct PostTruth {
  double base_x = 0.0;
  int base_y = 0;
  int left_x = 0;
  int right_x = 0;
};

struct ObstacleTruth {
  int left_x = 0, right_x = 0, base_y = 0;
};

struct LineTruth {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
};

struct GroundTruth {
  std::uint64_t seq = 0;
  std::optional<BallTruth> ball;
  std::vector<PostTruth> posts;
  std::vector<ObstacleTruth> obstacles;
  std::vector<LineTruth> lines;
  HorizonProfile horizon;
};

class SceneError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void validate_scene(const SceneSpec& s) {
  auto fail = [](const std::string& why) { return SceneError("scene: " + why); };
  if (s.width < 2 || s.height < 2) throw fail("dimensions must be at least 2x2");
  auto inside = [&](double x, double y) { return x >= 0 && y >= 0 && x <= s.width - 1 && y <= s.height - 1; };
  if (s.ball) {
    const auto& b = *s.ball;
    if (!(b.radius > 0)) throw fail("ball radius must be positive");
    if (!inside(b.cx - b.radius, b.cy - b.radius) || !inside(b.cx + b.radius, b.cy + b.radius))
      throw fail("ball must lie within the frame");
    if (b.occlusion < 0.0 || b.occlusion > 0.6) throw fail("ball occlusion must lie in [0, 0.6]");
  }
  for (const auto& p : s.posts)
    if (p.width < 1 || p.top_y > p.base_y || !inside(p.x, p.top_y) || !inside(p.x + p.width - 1, p.base_y))
      throw fail("goal post must lie within the frame");
  for (const auto& o : s.obstacles)
    if (o.x0 > o.x1 || o.top_y > o.base_y || !inside(o.x0, o.top_y) || !inside(o.x1, o.base_y))
      throw fail("obstacle must lie within the frame");
  for (const auto& l : s.lines)
    if (!inside(l.x0, l.y0) || !inside(l.x1, l.y1) || !(l.width > 0))
      throw fail("field line must lie within the frame");
  for (const auto& c : s.clutter)
    if (c.x0 > c.x1 || c.y0 > c.y1 || !inside(c.x0, c.y0) || !inside(c.x1, c.y1))
      throw fail("clutter rectangle must lie within the frame");
  if (s.flip_probability < 0.0 || s.flip_probability > 1.0)
    throw fail("flip probability must lie in [0, 1]");
}

inline KinematicsSnapshot scene_kinematics(const SceneSpec& s) {
  KinematicsSnapshot k;
  if (!s.kinematics) return k;
  const double y0 = s.horizon.y_at(0, s.width) - s.kinematics->margin;
  const double y1 = s.horizon.y_at(s.width - 1, s.width) - s.kinematics->margin;
  k.horizon = Line2::through(0.0, y0, static_cast<double>(s.width - 1), y1);
  k.camera_pitch = s.kinematics->pitch;
  k.camera_height = s.kinematics->height;
  k.valid = true;
  return k;
}

namespace detail {

inline void fill_rect(Frame& f, int x0, int y0, int x1, int y1, Pixel c) {
  x0 = std::max(x0, 0);
  y0 = std::max(y0, 0);
  x1 = std::min(x1, f.width() - 1);
  y1 = std::min(y1, f.height() - 1);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) f.at(x, y) = c;
}

inline double segment_distance(double px, double py, const LineSpec& l) {
  const double dx = l.x1 - l.x0, dy = l.y1 - l.y0;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - l.x0) * dx + (py - l.y0) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (l.x0 + t * dx), py - (l.y0 + t * dy));
}

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Renders one frame and its ground truth. Deterministic in (spec, frame_index).
inline std::pair<Frame, GroundTruth> render_scene(const SceneSpec& spec, std::uint64_t frame_index) {
  validate_scene(spec);
  const int w = spec.width, h = spec.height;
  Frame f = Frame::filled(w, h, kBackground, frame_index);
  GroundTruth truth;
  truth.seq = frame_index;
  truth.horizon = spec.horizon;

  for (const auto& c : spec.clutter) detail::fill_rect(f, c.x0, c.y0, c.x1, c.y1, c.colour);

  std::vector<int> top(static_cast<std::size_t>(w));
  for (int x = 0; x < w; ++x) {
    top[static_cast<std::size_t>(x)] = std::max(0, spec.horizon.field_top(x, w));
    for (int y = top[static_cast<std::size_t>(x)]; y < h; ++y) f.at(x, y) = paint::kGreen;
  }

  for (const auto& l : spec.lines) {
    const double r = l.width / 2.0;
    const int x0 = static_cast<int>(std::floor(std::min(l.x0, l.x1) - r));
    const int x1 = static_cast<int>(std::ceil(std::max(l.x0, l.x1) + r));
    const int y0 = static_cast<int>(std::floor(std::min(l.y0, l.y1) - r));
    const int y1 = static_cast<int>(std::ceil(std::max(l.y0, l.y1) + r));
    for (int y = std::max(0, y0); y <= std::min(h - 1, y1); ++y)
      for (int x = std::max(0, x0); x <= std::min(w - 1, x1); ++x)
        if (y >= top[static_cast<std::size_t>(x)] && detail::segment_distance(x, y, l) <= r)
          f.at(x, y) = paint::kWhite;
    truth.lines.push_back({l.x0, l.y0, l.x1, l.y1});
  }

  for (const auto& p : spec.posts) {
    detail::fill_rect(f, p.x, p.top_y, p.x + p.width - 1, p.base_y, paint::kYellow);
    truth.posts.push_back({p.x + (p.width - 1) / 2.0, p.base_y, p.x, p.x + p.width - 1});
  }

  if (spec.ball) {
    const auto& b = *spec.ball;
    const double r2 = b.radius * b.radius;
    for (int y = static_cast<int>(std::floor(b.cy - b.radius)); y <= static_cast<int>(std::ceil(b.cy + b.radius)); ++y)
      for (int x = static_cast<int>(std::floor(b.cx - b.radius)); x <= static_cast<int>(std::ceil(b.cx + b.radius)); ++x)
        if (f.contains(x, y) && (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy) <= r2)
          f.at(x, y) = paint::kOrange;
    if (b.occlusion > 0.0) {
      const double cover = 2.0 * b.radius * b.occlusion;
      const int lo_x = static_cast<int>(std::floor(b.cx - b.radius)) - 1;
      const int hi_x = static_cast<int>(std::ceil(b.cx + b.radius)) + 1;
      const int lo_y = static_cast<int>(std::floor(b.cy - b.radius)) - 1;
      const int hi_y = static_cast<int>(std::ceil(b.cy + b.radius)) + 1;
      switch (b.occluded_side) {
        case Side::Left:
          detail::fill_rect(f, lo_x, lo_y, static_cast<int>(std::floor(b.cx - b.radius + cover)), hi_y, b.occluder);
          break;
        case Side::Right:
          detail::fill_rect(f, static_cast<int>(std::ceil(b.cx + b.radius - cover)), lo_y, hi_x, hi_y, b.occluder);
          break;
        case Side::Top:
          detail::fill_rect(f, lo_x, lo_y, hi_x, static_cast<int>(std::floor(b.cy - b.radius + cover)), b.occluder);
          break;
        case Side::Bottom:
          detail::fill_rect(f, lo_x, static_cast<int>(std::ceil(b.cy + b.radius - cover)), hi_x, hi_y, b.occluder);
          break;
      }
    }
    truth.ball = BallTruth{b.cx, b.cy, b.radius, b.occlusion, b.occluded_side};
  }

  for (const auto& o : spec.obstacles) {
    detail::fill_rect(f, o.x0, o.top_y, o.x1, o.base_y, paint::kObstacle);
    truth.obstacles.push_back({o.x0, o.x1, o.base_y});
  }

  if (spec.flip_probability > 0.0) {
    static constexpr std::array<Pixel, 5> palette = {paint::kGreen, paint::kOrange, paint::kYellow,
                                                     paint::kWhite, paint::kObstacle};
    std::mt19937_64 rng(detail::mix(spec.seed ^ detail::mix(frame_index)));
    std::geometric_distribution<long long> skip(spec.flip_probability);
    std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 2);
    const long long n = static_cast<long long>(w) * h;
    for (long long i = skip(rng); i < n; i += 1 + skip(rng)) {
      Pixel& px = f.at(static_cast<int>(i % w), static_cast<int>(i / w));
      // Choose uniformly among the palette entries that differ from the pixel.
      std::size_t k = pick(rng);
      const auto self = std::find(palette.begin(), palette.end(), px);
      if (self != palette.end() && k >= static_cast<std::size_t>(self - palette.begin())) ++k;
      px = palette[std::min(k, palette.size() - 1)];
    }
  }
  return {std::move(f), std::move(truth)};
}

}  // namespace fv::synth
