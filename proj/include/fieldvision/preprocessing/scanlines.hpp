/**
 * @file scanlines.hpp
 *
 * Scanline classification. Below the green horizon both vertical and
 * horizontal scanlines are run; above it only horizontal ones, since goal
 * posts are the only thing of interest there.
 */

#pragma once

#include <algorithm>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/preprocessing/green_horizon.hpp"
#include "fieldvision/preprocessing/segments.hpp"
#include "fieldvision/preprocessing/transitions.hpp"

namespace fv {

enum class AboveHullScan : std::uint8_t {
  Always,             // every horizontal scanline covers the full row
  IfGoalEvidenceBelow // only when a goal-rule transition exists below the hull
};

/// First field row per column, clamped to [0, height].
inline std::vector<int> horizon_top_rows(const GreenHorizon& horizon, int width, int height) {
  std::vector<int> rows(static_cast<std::size_t>(width));
  for (int x = 0; x < width; ++x) rows[static_cast<std::size_t>(x)] =
      std::clamp(horizon.top_row(x), 0, height);
  return rows;
}

/**
 * Geometry of every scanline span. Vertical scanlines sit at multiples of
 * vertical_spacing and run from the hull to the bottom edge. Horizontal
 * scanlines sit at multiples of horizontal_spacing and are split wherever
 * they cross the hull.
 */
inline std::vector<ScanSpan> scan_spans(int width, int height, const GreenHorizon& horizon,
                                        const ScanConfig& config, bool include_above) {
  const auto top = horizon_top_rows(horizon, width, height);
  std::vector<ScanSpan> spans;
  int index = 0;
  for (int x = 0; x < width; x += config.vertical_spacing, ++index) {
    const int start = top[static_cast<std::size_t>(x)];
    if (start <= height - 1)
      spans.push_back({Orientation::Vertical, index, 0, x, start, height - 1, ScanRegion::BelowHull});
  }
  index = 0;
  for (int y = 0; y < height; y += config.horizontal_spacing, ++index) {
    int ordinal = 0;
    int x = 0;
    while (x < width) {
      const bool below = y >= top[static_cast<std::size_t>(x)];
      int end = x;
      while (end + 1 < width && (y >= top[static_cast<std::size_t>(end + 1)]) == below) ++end;
      if (below || include_above)
        spans.push_back({Orientation::Horizontal, index, ordinal, y, x, end,
                         below ? ScanRegion::BelowHull : ScanRegion::AboveHull});
      ++ordinal;
      x = end + 1;
    }
  }
  return spans;
}

/// Run-length encodes one span; unclassified runs and runs shorter than
/// min_segment_length are dropped.
inline void segment_span(const Frame& frame, const ColourLUT& lut, const ScanSpan& span,
                         int min_segment_length, std::vector<ColourSegment>& out) {
  int run_start = span.start;
  ColourClass run_colour = lut.classify(frame.at(span.point(span.start).x, span.point(span.start).y));
  auto flush = [&](int run_end) {
    const int length = run_end - run_start + 1;
    if (run_colour != ColourClass::Unclassified && length >= min_segment_length)
      out.push_back({span.orientation, span.scan_index, span.span, span.region,
                     span.point(run_start), span.point(run_end), run_colour, length, span.start, span.end});
  };
  for (int p = span.start + 1; p <= span.end; ++p) {
    const Point2 q = span.point(p);
    const ColourClass c = lut.classify(frame.at(q.x, q.y));
    if (c != run_colour) {
      flush(p - 1);
      run_start = p;
      run_colour = c;
    }
  }
  flush(span.end);
}

inline SegmentSet classify_scanlines(const Frame& frame, const ColourLUT& lut,
                                     const GreenHorizon& horizon, const ScanConfig& config,
                                     AboveHullScan above = AboveHullScan::Always) {
  config.validate();
  SegmentSet out;
  const auto spans = scan_spans(frame.width(), frame.height(), horizon, config, true);
  for (const ScanSpan& s : spans) {
    if (s.region == ScanRegion::AboveHull) continue;
    segment_span(frame, lut, s, config.min_segment_length,
                 s.orientation == Orientation::Vertical ? out.vertical : out.horizontal);
  }
  const bool scan_above = above == AboveHullScan::Always ||
                          has_goal_evidence_below(out, config.min_segment_length);
  if (scan_above) {
    for (const ScanSpan& s : spans)
      if (s.region == ScanRegion::AboveHull)
        segment_span(frame, lut, s, config.min_segment_length, out.horizontal);
  }
  auto order = [](const ColourSegment& a, const ColourSegment& b) {
    if (a.scan_index != b.scan_index) return a.scan_index < b.scan_index;
    if (a.span != b.span) return a.span < b.span;
    return a.first() < b.first();
  };
  std::sort(out.horizontal.begin(), out.horizontal.end(), order);
  return out;
}

}  // namespace fv
