#pragma once

#include <cstdint>
#include <vector>

#include "fieldvision/core/types.hpp"

namespace fv {

enum class Orientation : std::uint8_t { Vertical, Horizontal };

/// Which side of the green horizon a scanline span lies on.
enum class ScanRegion : std::uint8_t { BelowHull, AboveHull };

/// A contiguous stretch of one scanline that lies entirely on one side of the
/// green horizon. Start and end are inclusive positions along the scan axis.
struct ScanSpan {
  Orientation orientation = Orientation::Vertical;
  int scan_index = 0;
  int span = 0;   // ordinal of the span within its scanline
  int fixed = 0;  // x for vertical scanlines, y for horizontal
  int start = 0;
  int end = 0;
  ScanRegion region = ScanRegion::BelowHull;

  Point2 point(int along) const {
    return orientation == Orientation::Vertical ? Point2{fixed, along} : Point2{along, fixed};
  }
  int length() const { return end - start + 1; }
};

/// A maximal run of same-class pixels along a scanline. Unclassified runs are
/// never stored; they are gaps between segments.
struct ColourSegment {
  Orientation orientation = Orientation::Vertical;
  int scan_index = 0;
  int span = 0;
  ScanRegion region = ScanRegion::BelowHull;
  Point2 start;
  Point2 end;
  ColourClass colour = ColourClass::Unclassified;
  int length = 0;
  int span_start = 0;  // bounds of the originating span along the scan axis
  int span_end = 0;

  /// Coordinate along the scan direction.
  int first() const { return orientation == Orientation::Vertical ? start.y : start.x; }
  int last() const { return orientation == Orientation::Vertical ? end.y : end.x; }

  friend bool operator==(const ColourSegment&, const ColourSegment&) = default;
};

/// Segments of one frame, each list ordered by (scan_index, span, start).
struct SegmentSet {
  std::vector<ColourSegment> vertical;
  std::vector<ColourSegment> horizontal;

  std::size_t size() const { return vertical.size() + horizontal.size(); }
  friend bool operator==(const SegmentSet&, const SegmentSet&) = default;
};

struct ColourTransition {
  Point2 position;
  ColourClass before = ColourClass::Unclassified;
  ColourClass after = ColourClass::Unclassified;
  Orientation orientation = Orientation::Vertical;
  ScanRegion region = ScanRegion::BelowHull;

  bool involves(ColourClass c) const { return before == c || after == c; }
  friend bool operator==(const ColourTransition&, const ColourTransition&) = default;
};

/// Transitions bucketed by detector rule. A transition lands in every bucket
/// whose colour it touches.
struct TransitionSet {
  std::vector<ColourTransition> ball;  // orange on either side
  std::vector<ColourTransition> goal;  // yellow on either side
  std::vector<ColourTransition> line;  // white on either side

  friend bool operator==(const TransitionSet&, const TransitionSet&) = default;
};

}  // namespace fv
