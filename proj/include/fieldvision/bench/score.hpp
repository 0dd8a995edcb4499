/**
 * @file score.hpp
 *
 * Scores detection records against generator ground truth. Within each frame
 * and object class, detection/truth pairs are matched greedily from the
 * smallest error upwards; a pair matches only within tolerance. Unmatched
 * detections are false positives, unmatched truth objects are misses. Frames
 * where a detector did not finish ok are not scored for that class.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/bench/records.hpp"
#include "fieldvision/bench/report.hpp"
#include "fieldvision/synthgen/scene.hpp"

namespace fv::bench {

struct ScoreTolerances {
  double ball_px = 5.0;
  double post_px = 8.0;
  double obstacle_iou = 0.5;
  double line_px = 3.0;
  double line_deg = 3.0;
};

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear-interpolated percentile, q in [0, 100]; nullopt for no data.
inline std::optional<double> percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const double pos = q / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

struct ClassScore {
  std::size_t frames = 0;  // frames where this class was scored
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t misses = 0;
  std::vector<double> errors;  // per match: px for ball/post/line, IoU for obstacles
  std::vector<double> angle_errors_deg;   // lines only
  std::vector<double> radius_errors_rel;  // ball only

  /// Undefined when nothing was detected.
  std::optional<double> precision() const {
    const auto d = true_positives + false_positives;
    return d == 0 ? std::nullopt : std::optional<double>(static_cast<double>(true_positives) / d);
  }
  /// Undefined when there was nothing to find.
  std::optional<double> recall() const {
    const auto d = true_positives + misses;
    return d == 0 ? std::nullopt : std::optional<double>(static_cast<double>(true_positives) / d);
  }
};

struct ScoreReport {
  ClassScore ball, posts, obstacles, lines;
  std::size_t post_free_frames = 0;
  std::size_t false_posts_on_post_free = 0;
};

/// Distance from the truth segment midpoint to the detected line, and the
/// angle between them in degrees.
inline std::pair<double, double> line_errors(const synth::LineTruth& t, const FieldLine& d) {
  const double mx = 0.5 * (t.x0 + t.x1), my = 0.5 * (t.y0 + t.y1);
  const double dist = std::abs(d.line.signed_distance(mx, my));
  const Line2 truth = Line2::through(t.x0, t.y0, t.x1, t.y1);
  return {dist, rad_to_deg(line_angle_between(truth, d.line))};
}

inline double span_iou(int a0, int a1, int b0, int b1) {
  const double inter = std::max(0, std::min(a1, b1) - std::max(a0, b0) + 1);
  const double uni = (a1 - a0 + 1) + (b1 - b0 + 1) - inter;
  return uni > 0 ? inter / uni : 0.0;
}

namespace detail {

/// Greedy matching on a cost matrix; cost nullopt means "cannot match".
/// Returns matched (detection, truth) index pairs.
inline std::vector<std::pair<std::size_t, std::size_t>> greedy_match(
    std::size_t n_det, std::size_t n_truth,
    const std::function<std::optional<double>(std::size_t, std::size_t)>& cost) {
  struct Cand {
    double c;
    std::size_t d, t;
  };
  std::vector<Cand> cands;
  for (std::size_t d = 0; d < n_det; ++d)
    for (std::size_t t = 0; t < n_truth; ++t)
      if (auto c = cost(d, t)) cands.push_back({*c, d, t});
  std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.c < b.c; });
  std::vector<bool> used_d(n_det), used_t(n_truth);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& c : cands) {
    if (used_d[c.d] || used_t[c.t]) continue;
    used_d[c.d] = used_t[c.t] = true;
    out.emplace_back(c.d, c.t);
  }
  return out;
}

inline void tally(ClassScore& s, std::size_t n_det, std::size_t n_truth, std::size_t matched) {
  ++s.frames;
  s.true_positives += matched;
  s.false_positives += n_det - matched;
  s.misses += n_truth - matched;
}

}  // namespace detail

inline void score_frame(ScoreReport& r, const DetectionRecord& rec, const synth::GroundTruth& gt,
                        const ScoreTolerances& tol) {
  const DetectionSet& d = rec.detections;
  if (d.balls) {
    std::vector<synth::BallTruth> truth;
    if (gt.ball) truth.push_back(*gt.ball);
    auto err = [&](std::size_t i, std::size_t j) {
      return std::hypot((*d.balls)[i].centre.x - truth[j].cx, (*d.balls)[i].centre.y - truth[j].cy);
    };
    const auto m = detail::greedy_match(d.balls->size(), truth.size(), [&](std::size_t i, std::size_t j) {
      const double e = err(i, j);
      return e <= tol.ball_px ? std::optional<double>(e) : std::nullopt;
    });
    for (auto [i, j] : m) {
      r.ball.errors.push_back(err(i, j));
      r.ball.radius_errors_rel.push_back(std::abs((*d.balls)[i].radius - truth[j].radius) / truth[j].radius);
    }
    detail::tally(r.ball, d.balls->size(), truth.size(), m.size());
  }
  if (d.goalposts) {
    const auto& det = *d.goalposts;
    auto err = [&](std::size_t i, std::size_t j) {
      return std::hypot(det[i].base.x - gt.posts[j].base_x, det[i].base.y - gt.posts[j].base_y);
    };
    const auto m = detail::greedy_match(det.size(), gt.posts.size(), [&](std::size_t i, std::size_t j) {
      const double e = err(i, j);
      return e <= tol.post_px ? std::optional<double>(e) : std::nullopt;
    });
    for (auto [i, j] : m) r.posts.errors.push_back(err(i, j));
    detail::tally(r.posts, det.size(), gt.posts.size(), m.size());
    if (gt.posts.empty()) {
      ++r.post_free_frames;
      r.false_posts_on_post_free += det.size();
    }
  }
  if (d.obstacles) {
    const auto& det = *d.obstacles;
    auto iou = [&](std::size_t i, std::size_t j) {
      return span_iou(det[i].left_x, det[i].right_x, gt.obstacles[j].left_x, gt.obstacles[j].right_x);
    };
    const auto m = detail::greedy_match(det.size(), gt.obstacles.size(), [&](std::size_t i, std::size_t j) {
      const double v = iou(i, j);
      return v >= tol.obstacle_iou ? std::optional<double>(1.0 - v) : std::nullopt;
    });
    for (auto [i, j] : m) r.obstacles.errors.push_back(iou(i, j));
    detail::tally(r.obstacles, det.size(), gt.obstacles.size(), m.size());
  }
  if (d.lines) {
    const auto& det = *d.lines;
    const auto m = detail::greedy_match(det.size(), gt.lines.size(), [&](std::size_t i, std::size_t j) {
      const auto [dist, ang] = line_errors(gt.lines[j], det[i]);
      if (dist > tol.line_px || ang > tol.line_deg) return std::optional<double>();
      return std::optional<double>(dist / tol.line_px + ang / tol.line_deg);
    });
    for (auto [i, j] : m) {
      const auto [dist, ang] = line_errors(gt.lines[j], det[i]);
      r.lines.errors.push_back(dist);
      r.lines.angle_errors_deg.push_back(ang);
    }
    detail::tally(r.lines, det.size(), gt.lines.size(), m.size());
  }
}

/// Records and truth are aligned by sequence index; both must cover the same
/// frames.
inline ScoreReport score(const std::vector<DetectionRecord>& records, const std::vector<synth::GroundTruth>& truth,
                         const ScoreTolerances& tol = {}) {
  if (records.size() != truth.size())
    throw ScoreError("detections have " + std::to_string(records.size()) + " frames, truth has " +
                     std::to_string(truth.size()));
  std::map<std::uint64_t, const synth::GroundTruth*> by_seq;
  for (const auto& t : truth) by_seq[t.seq] = &t;
  ScoreReport r;
  for (const auto& rec : records) {
    const auto it = by_seq.find(rec.seq);
    if (it == by_seq.end()) throw ScoreError("no truth record for frame " + std::to_string(rec.seq));
    score_frame(r, rec, *it->second, tol);
  }
  return r;
}

namespace detail {

inline nlohmann::json class_json(const ClassScore& s, const char* error_name) {
  auto opt = [](std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json j{{"frames", s.frames},
                   {"true_positives", s.true_positives},
                   {"false_positives", s.false_positives},
                   {"misses", s.misses},
                   {"precision", opt(s.precision())},
                   {"precision_undefined", !s.precision().has_value()},
                   {"recall", opt(s.recall())},
                   {"recall_undefined", !s.recall().has_value()}};
  j[error_name] = {{"p50", opt(percentile(s.errors, 50))},
                   {"p90", opt(percentile(s.errors, 90))},
                   {"max", opt(percentile(s.errors, 100))}};
  if (!s.angle_errors_deg.empty() || std::string(error_name) == "distance_px")
    j["angle_deg"] = {{"p50", opt(percentile(s.angle_errors_deg, 50))},
                      {"p90", opt(percentile(s.angle_errors_deg, 90))},
                      {"max", opt(percentile(s.angle_errors_deg, 100))}};
  if (!s.radius_errors_rel.empty())
    j["radius_rel"] = {{"p50", opt(percentile(s.radius_errors_rel, 50))},
                       {"max", opt(percentile(s.radius_errors_rel, 100))}};
  return j;
}

}  // namespace detail

inline nlohmann::json score_to_json(const ScoreReport& r) {
  return {{"version", 1},
          {"ball", detail::class_json(r.ball, "centre_px")},
          {"posts", detail::class_json(r.posts, "base_px")},
          {"obstacles", detail::class_json(r.obstacles, "iou")},
          {"lines", detail::class_json(r.lines, "distance_px")},
          {"post_free_frames", r.post_free_frames},
          {"false_posts_on_post_free_frames", r.false_posts_on_post_free}};
}

inline std::string score_table(const ScoreReport& r) {
  using detail::fmt;
  using detail::pad;
  auto opt = [](std::optional<double> v, int p = 3) { return v ? fmt(*v, p) : std::string("undefined"); };
  std::ostringstream out;
  out << pad("Object", 10) << "  " << pad("TP", 6, true) << "  " << pad("FP", 6, true) << "  " << pad("Miss", 6, true)
      << "  " << pad("Precision", 10, true) << "  " << pad("Recall", 10, true) << "  " << pad("Error p50", 10, true)
      << "  " << pad("Error p90", 10, true) << '\n';
  auto row = [&](const char* name, const ClassScore& s, const char* unit) {
    out << pad(name, 10) << "  " << pad(std::to_string(s.true_positives), 6, true) << "  "
        << pad(std::to_string(s.false_positives), 6, true) << "  " << pad(std::to_string(s.misses), 6, true) << "  "
        << pad(opt(s.precision()), 10, true) << "  " << pad(opt(s.recall()), 10, true) << "  "
        << pad(opt(percentile(s.errors, 50), 2) + unit, 10, true) << "  "
        << pad(opt(percentile(s.errors, 90), 2) + unit, 10, true) << '\n';
  };
  row("ball", r.ball, "px");
  row("posts", r.posts, "px");
  row("obstacles", r.obstacles, "iou");
  row("lines", r.lines, "px");
  out << "line angle error p50 " << opt(percentile(r.lines.angle_errors_deg, 50), 2) << " deg, p90 "
      << opt(percentile(r.lines.angle_errors_deg, 90), 2) << " deg\n";
  out << "false posts on " << r.post_free_frames << " post-free frames: " << r.false_posts_on_post_free << '\n';
  return out.str();
}

/// Pinhole range estimate from an apparent radius. Informational only.
inline std::optional<double> estimate_distance(double radius_px, double focal_px, double object_radius_m) {
  if (!(radius_px > 0.0) || !(focal_px > 0.0) || !(object_radius_m > 0.0)) return std::nullopt;
  return focal_px * object_radius_m / radius_px;
}

}  // namespace fv::bench
