/**
 * @file presets.hpp
 *
 * Five bundled scene streams: lab1, lab2, difficult, rc2012, rc2013. Each
 * frame is laid out from a generator seeded by (preset, seed, frame index),
 * so any frame can be rendered on its own. The horizon drifts smoothly from
 * frame to frame; objects are re-placed every frame.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "fieldvision/synthgen/scene.hpp"

namespace fv::synth {

struct PresetProfile {
  std::string_view name;
  std::size_t default_frames;
  double noise;
  int clutter_min, clutter_max;
  int obstacles_min, obstacles_max;
  int lines_min, lines_max;
  double ball_probability;
  double occlusion;              // applied to every ball
  double occlusion_probability;  // chance of an extra light occlusion when occlusion == 0
  bool kinematics;
};

inline constexpr PresetProfile kPresets[] = {
    {"lab1", 5090, 0.002, 1, 2, 0, 1, 1, 2, 0.9, 0.0, 0.2, true},
    {"lab2", 470, 0.0, 0, 1, 0, 1, 1, 3, 0.9, 0.0, 0.0, true},
    {"difficult", 175, 0.02, 3, 6, 1, 2, 1, 2, 0.9, 0.3, 0.0, false},
    {"rc2012", 2640, 0.005, 2, 4, 1, 2, 2, 3, 0.85, 0.0, 0.1, true},
    {"rc2013", 625, 0.0, 1, 2, 2, 4, 1, 2, 0.85, 0.0, 0.0, true},
};

inline const PresetProfile* find_preset(std::string_view name) {
  for (const auto& p : kPresets)
    if (p.name == name) return &p;
  return nullptr;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : kPresets) out.emplace_back(p.name);
  return out;
}

struct PresetOptions {
  std::uint64_t seed = 1;
  bool clean = false;  // drop per-pixel noise, keep everything else
};

namespace detail {

inline std::uint64_t hash_name(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

struct Interval {
  int lo, hi;
};

class Bands {
 public:
  bool free(int lo, int hi, int gap) const {
    for (const auto& b : used_)
      if (lo <= b.hi + gap && hi >= b.lo - gap) return false;
    return true;
  }
  void take(int lo, int hi) { used_.push_back({lo, hi}); }

 private:
  std::vector<Interval> used_;
};

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace detail

/// Scene for frame `index` of a preset stream.
inline SceneSpec preset_scene(const PresetProfile& profile, std::uint64_t index,
                              const PresetOptions& options = {}) {
  using detail::uniform;
  using detail::uniform_real;
  std::mt19937_64 rng(detail::mix(options.seed ^ detail::hash_name(profile.name)) ^ detail::mix(index + 1));

  SceneSpec s;
  s.width = 640;
  s.height = 480;
  s.seed = detail::mix(options.seed + index);
  s.flip_probability = options.clean ? 0.0 : profile.noise;
  const double t = static_cast<double>(index);
  const double phase = static_cast<double>(detail::hash_name(profile.name) % 628) / 100.0;
  s.horizon.left_y = 150.0 + 30.0 * std::sin(t * 0.05 + phase);
  s.horizon.right_y = s.horizon.left_y + 40.0 * std::sin(t * 0.031 + 2.0 * phase);
  if (profile.kinematics) s.kinematics = KinematicsSpec{20.0, -0.3, 0.45};

  const int w = s.width, h = s.height;
  auto top_at = [&](int x) { return s.horizon.field_top(std::clamp(x, 0, w - 1), w); };
  auto max_top = [&](int x0, int x1) { return std::max(top_at(x0), top_at(x1)); };
  auto min_top = [&](int x0, int x1) { return std::min(top_at(x0), top_at(x1)); };
  detail::Bands bands;

  const int post_mode = uniform(rng, 0, 2);  // no posts, one post, a goal
  auto place_post = [&](int x) {
    const int pw = uniform(rng, 14, 16);
    if (x < 40 || x + pw - 1 > w - 41 || !bands.free(x, x + pw - 1, 24)) return false;
    const int base = max_top(x, x + pw - 1) + uniform(rng, 8, 14);
    const int top = std::max(4, min_top(x, x + pw - 1) - uniform(rng, 90, 150));
    s.posts.push_back({x, pw, top, base});
    bands.take(x, x + pw - 1);
    return true;
  };
  for (int attempt = 0; attempt < 20 && post_mode > 0 && s.posts.empty(); ++attempt) {
    const int x = uniform(rng, 40, w - 60);
    if (post_mode == 1) {
      place_post(x);
    } else {
      const int x2 = x + uniform(rng, 140, 240);
      if (x2 + 16 > w - 41) continue;
      if (place_post(x)) place_post(x2);
    }
  }

  const int n_obstacles = uniform(rng, profile.obstacles_min, profile.obstacles_max);
  for (int k = 0, attempts = 0; k < n_obstacles && attempts < 50; ++attempts) {
    const int ow = uniform(rng, 80, 130);
    const int x0 = uniform(rng, 40, w - 41 - ow);
    const int x1 = x0 + ow - 1;
    if (!bands.free(x0, x1, 24)) continue;
    const int base = max_top(x0, x1) + uniform(rng, 20, 80);
    const int top = std::max(0, min_top(x0, x1) - uniform(rng, 40, 120));
    s.obstacles.push_back({x0, x1, top, base});
    bands.take(x0, x1);
    ++k;
  }

  if (detail::uniform_real(rng, 0.0, 1.0) < profile.ball_probability) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      const int r = uniform(rng, 10, 26);
      const int cx = uniform(rng, r + 4, w - r - 5);
      const int lo = max_top(cx - r, cx + r) + r + 15;
      const int hi = h - r - 5;
      if (lo > hi || !bands.free(cx - r - 2, cx + r + 2, 16)) continue;
      BallSpec b;
      b.cx = cx;
      b.cy = uniform(rng, lo, hi);
      b.radius = r;
      b.occluded_side = static_cast<Side>(uniform(rng, 0, 3));
      if (profile.occlusion > 0.0) {
        b.occlusion = profile.occlusion;
      } else if (uniform_real(rng, 0.0, 1.0) < profile.occlusion_probability) {
        b.occlusion = 0.2;
      }
      s.ball = b;
      bands.take(cx - r - 2, cx + r + 2);
      break;
    }
  }

  const auto lines_tangle = [](const LineSpec& a, const LineSpec& b) {
    const double da = std::atan2(a.y1 - a.y0, a.x1 - a.x0), db = std::atan2(b.y1 - b.y0, b.x1 - b.x0);
    const double diff = std::abs(std::remainder(da - db, kPi));
    if (diff >= deg_to_rad(15.0)) return false;
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      const double px = a.x0 + t * (a.x1 - a.x0), py = a.y0 + t * (a.y1 - a.y0);
      const double vx = b.x1 - b.x0, vy = b.y1 - b.y0;
      const double u = std::clamp(((px - b.x0) * vx + (py - b.y0) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
      if (std::hypot(px - b.x0 - u * vx, py - b.y0 - u * vy) < 30.0) return true;
    }
    return false;
  };
  const int n_lines = uniform(rng, profile.lines_min, profile.lines_max);
  const int field_low = max_top(0, w - 1);
  std::vector<double> transverse_y;
  for (int k = 0, attempts = 0; k < n_lines && attempts < 50; ++attempts) {
    LineSpec l;
    l.width = 4.0;
    if (uniform(rng, 0, 1) == 0) {
      const double y0 = uniform(rng, field_low + 30, h - 20);
      const double y1 = std::clamp(y0 + uniform(rng, -40, 40), field_low + 30.0, h - 20.0);
      const double mid = (y0 + y1) / 2.0;
      bool crowded = false;
      for (double other : transverse_y) crowded = crowded || std::abs(other - mid) < 40.0;
      if (crowded) continue;
      l.x0 = uniform(rng, 0, 60);
      l.y0 = y0;
      l.x1 = uniform(rng, w - 61, w - 1);
      l.y1 = y1;
      transverse_y.push_back(mid);
    } else {
      l.x0 = uniform(rng, 40, w - 41);
      l.y0 = h - 5;
      l.x1 = std::clamp(l.x0 + uniform(rng, -250, 250), 20.0, w - 21.0);
      l.y1 = uniform(rng, field_low + 15, field_low + 60);
    }
    if (std::hypot(l.x1 - l.x0, l.y1 - l.y0) < 200.0) continue;
    const auto clear = [&](double x, double y) { return y >= top_at(static_cast<int>(x)) + 12; };
    if (!clear(l.x0, l.y0) || !clear(l.x1, l.y1)) continue;
    // Real markings never run side by side at a shallow angle; such pairs
    // would overlap into one ambiguous stroke.
    bool tangled = false;
    for (const LineSpec& o : s.lines) tangled = tangled || lines_tangle(l, o);
    if (tangled) continue;
    s.lines.push_back(l);
    ++k;
  }

  const int n_clutter = uniform(rng, profile.clutter_min, profile.clutter_max);
  const int sky = min_top(0, w - 1) - 20;
  static constexpr Pixel clutter_colours[] = {paint::kYellow, paint::kWhite, paint::kObstacle,
                                              Pixel{90, 170, 90}};
  for (int k = 0, attempts = 0; k < n_clutter && attempts < 50 && sky > 30; ++attempts) {
    const int cw = uniform(rng, 8, 40);
    const int ch = uniform(rng, 6, 24);
    const int x0 = uniform(rng, 0, w - cw);
    const int y0 = uniform(rng, 0, sky - ch);
    bool near_post = false;
    for (const auto& p : s.posts) near_post = near_post || (x0 <= p.x + p.width + 20 && x0 + cw - 1 >= p.x - 20);
    if (near_post) continue;
    s.clutter.push_back({x0, y0, x0 + cw - 1, y0 + ch - 1, clutter_colours[uniform(rng, 0, 3)]});
    ++k;
  }
  return s;
}

inline SceneSpec preset_scene(std::string_view name, std::uint64_t index, const PresetOptions& options = {}) {
  const PresetProfile* p = find_preset(name);
  if (!p) throw SceneError("unknown preset '" + std::string(name) + "'");
  return preset_scene(*p, index, options);
}

}  // namespace fv::synth
