/**
 * @file field_lines.hpp
 *
 * Field line detection. RANSAC runs over the line-rule transitions below the
 * green horizon. A painted line has two borders, so models that are nearly
 * parallel and closer than a stroke width are merged and refit together.
 */

#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "fieldvision/detectors/ransac.hpp"
#include "fieldvision/preprocessing/segments.hpp"

namespace fv {

struct LineParams {
  double merge_angle_deg = 3.0;
  double max_line_width = 8.0;

  void validate() const {
    if (!(merge_angle_deg >= 0.0)) throw InvalidArgument("line.merge_angle_deg must be >= 0");
    if (!(max_line_width >= 0.0)) throw InvalidArgument("line.max_line_width must be >= 0");
  }
  friend bool operator==(const LineParams&, const LineParams&) = default;
};

/// Default RANSAC settings for lines: each painted line yields two border
/// models before merging, so twice the usual model budget.
inline RansacParams default_line_ransac() {
  RansacParams p;
  p.max_models = 12;
  return p;
}

namespace detail {

inline bool same_stroke(const FieldLine& a, const FieldLine& b, const LineParams& params) {
  if (line_angle_between(a.line, b.line) > deg_to_rad(params.merge_angle_deg)) return false;
  const double mx = 0.5 * (a.first.x + a.second.x);
  const double my = 0.5 * (a.first.y + a.second.y);
  if (point_line_distance(mx, my, b.line) > params.max_line_width) return false;
  // The two extents must overlap along the line direction.
  const auto [dx, dy] = a.line.direction();
  auto proj = [&](Point2 p) { return p.x * dx + p.y * dy; };
  const double a0 = std::min(proj(a.first), proj(a.second)), a1 = std::max(proj(a.first), proj(a.second));
  const double b0 = std::min(proj(b.first), proj(b.second)), b1 = std::max(proj(b.first), proj(b.second));
  return std::max(a0, b0) <= std::min(a1, b1);
}

}  // namespace detail

inline std::vector<FieldLine> detect_field_lines(std::span<const ColourTransition> transitions,
                                                 const RansacParams& ransac,
                                                 const LineParams& params = {}) {
  params.validate();
  std::vector<Point2> points;
  for (const ColourTransition& t : transitions)
    if (t.region == ScanRegion::BelowHull) points.push_back(t.position);

  auto models = ransac_models(points, ransac);
  std::vector<FieldLine> lines;
  std::vector<std::vector<Point2>> support;
  for (auto& m : models) {
    lines.push_back(m.line);
    support.push_back(std::move(m.inliers));
  }

  std::vector<bool> alive(lines.size(), true);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (!alive[j] || !detail::same_stroke(lines[i], lines[j], params)) continue;
      support[i].insert(support[i].end(), support[j].begin(), support[j].end());
      if (support[i].size() >= 2) lines[i] = make_field_line(fit_line_tls(support[i]), support[i]);
      alive[j] = false;
    }
  }
  std::vector<FieldLine> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (alive[i]) out.push_back(lines[i]);
  return out;
}

}  // namespace fv
