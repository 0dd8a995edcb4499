/**
 * @file ransac.hpp
 *
 * Multi-model RANSAC line extraction. Each round samples point pairs from a
 * seeded generator, keeps the hypothesis with the largest consensus, refits
 * it by total least squares and removes its inliers before the next round.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <tuple>
#include <utility>
#include <span>
#include <vector>

#include "fieldvision/core/types.hpp"

namespace fv {

struct RansacParams {
  int iterations = 100;
  double threshold = 2.0;
  int min_consensus = 10;
  int max_models = 6;
  std::uint64_t seed = 0x5eed;

  void validate() const {
    if (iterations < 1) throw InvalidArgument("ransac.iterations must be >= 1");
    if (!(threshold > 0.0)) throw InvalidArgument("ransac.threshold must be > 0");
    if (min_consensus < 2) throw InvalidArgument("ransac.min_consensus must be >= 2");
    if (max_models < 0) throw InvalidArgument("ransac.max_models must be >= 0");
  }

  friend bool operator==(const RansacParams&, const RansacParams&) = default;
};

struct FieldLine {
  Line2 line;
  Point2 first;  // extreme inlier projections onto the line
  Point2 second;
  int inliers = 0;

  double length() const { return std::hypot(second.x - first.x, second.y - first.y); }
  friend bool operator==(const FieldLine&, const FieldLine&) = default;
};

/// Total-least-squares line through the given points (at least two distinct).
inline Line2 fit_line_tls(std::span<const Point2> points) {
  double mx = 0.0, my = 0.0;
  for (const Point2& p : points) {
    mx += p.x;
    my += p.y;
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point2& p : points) {
    const double dx = p.x - mx, dy = p.y - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);  // principal direction
  const double a = -std::sin(theta);
  const double b = std::cos(theta);
  return Line2::from_coefficients(a, b, -(a * mx + b * my));
}

/// Builds a FieldLine whose endpoints are the extreme projections of the
/// points onto the line.
inline FieldLine make_field_line(const Line2& line, std::span<const Point2> points) {
  const auto [dx, dy] = line.direction();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Point2& p : points) {
    const double t = p.x * dx + p.y * dy;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  // Foot of the perpendicular from the origin.
  const double ox = -line.a() * line.c();
  const double oy = -line.b() * line.c();
  auto at = [&](double t) {
    return Point2{static_cast<int>(std::lround(ox + t * dx)),
                  static_cast<int>(std::lround(oy + t * dy))};
  };
  Point2 a = at(lo), b = at(hi);
  if (std::tie(b.x, b.y) < std::tie(a.x, a.y)) std::swap(a, b);  // left end first
  return {line, a, b, static_cast<int>(points.size())};
}

struct AcceptAnyLine {
  bool operator()(const Line2&) const { return true; }
};

/**
 * Extracts up to max_models lines. A hypothesis rejected by `accept` is
 * skipped; a refit rejected by `accept` is dropped but its inliers are still
 * removed. Fewer than two points yields no models. Deterministic for a fixed
 * seed.
 */
/// A RANSAC model together with the consensus set it was refit on.
struct RansacModel {
  FieldLine line;
  std::vector<Point2> inliers;
};

template <typename Accept = AcceptAnyLine>
std::vector<RansacModel> ransac_models(std::span<const Point2> points, const RansacParams& params,
                                       Accept&& accept = {}) {
  params.validate();
  std::vector<RansacModel> models;
  std::vector<Point2> remaining(points.begin(), points.end());
  std::mt19937_64 rng(params.seed);
  std::vector<Point2> consensus;

  for (int round = 0; round < params.max_models; ++round) {
    if (remaining.size() < 2 ||
        remaining.size() < static_cast<std::size_t>(params.min_consensus))
      break;
    std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
    int best_count = 0;
    Line2 best;
    for (int it = 0; it < params.iterations; ++it) {
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (j == i) j = (j + 1) % remaining.size();
      const Point2 p = remaining[i];
      const Point2 q = remaining[j];
      if (p == q) continue;
      const Line2 hypothesis = Line2::through(p, q);
      if (!accept(hypothesis)) continue;
      int count = 0;
      for (const Point2& r : remaining)
        if (point_line_distance(r, hypothesis) <= params.threshold) ++count;
      if (count > best_count) {
        best_count = count;
        best = hypothesis;
      }
    }
    if (best_count < params.min_consensus) break;

    consensus.clear();
    auto keep = std::stable_partition(remaining.begin(), remaining.end(), [&](const Point2& r) {
      return point_line_distance(r, best) > params.threshold;
    });
    consensus.assign(keep, remaining.end());
    remaining.erase(keep, remaining.end());

    const Line2 refit = fit_line_tls(consensus);
    if (accept(refit)) models.push_back({make_field_line(refit, consensus), consensus});
  }
  return models;
}

template <typename Accept = AcceptAnyLine>
std::vector<FieldLine> ransac_lines(std::span<const Point2> points, const RansacParams& params,
                                    Accept&& accept = {}) {
  std::vector<FieldLine> out;
  for (auto& m : ransac_models(points, params, std::forward<Accept>(accept))) out.push_back(m.line);
  return out;
}

}  // namespace fv
