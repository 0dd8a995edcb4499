/**
 * @file transitions.hpp
 *
 * Turns per-scanline segment lists into colour transitions and sorts them
 * into the ball, goal and line buckets.
 */

#pragma once

#include <span>
#include <vector>

#include "fieldvision/preprocessing/segments.hpp"

namespace fv {

namespace detail {

inline Point2 along(const ColourSegment& s, int coord) {
  return s.orientation == Orientation::Vertical ? Point2{s.start.x, coord}
                                                : Point2{coord, s.start.y};
}

inline void bucket(TransitionSet& out, const ColourTransition& t) {
  if (t.involves(ColourClass::BallOrange)) out.ball.push_back(t);
  if (t.involves(ColourClass::GoalYellow)) out.goal.push_back(t);
  if (t.involves(ColourClass::LineWhite)) out.line.push_back(t);
}

template <typename Emit>
void pair_segments(std::span<const ColourSegment> segs, int max_gap, Emit&& emit) {
  auto same_span = [](const ColourSegment& a, const ColourSegment& b) {
    return a.scan_index == b.scan_index && a.span == b.span;
  };
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const ColourSegment& t = segs[i];
    const bool first_in_span = i == 0 || !same_span(segs[i - 1], t);
    if (first_in_span) {
      // A wide unclassified stretch at either end of a span behaves like a
      // wide gap between segments.
      if (t.first() - t.span_start > max_gap)
        emit(ColourTransition{along(t, t.first() - 1), ColourClass::Unclassified, t.colour,
                              t.orientation, t.region});
    } else {
      const ColourSegment& s = segs[i - 1];
      const int gap = t.first() - s.last() - 1;
      if (gap <= max_gap) {
        if (s.colour != t.colour)
          emit(ColourTransition{along(s, (s.last() + t.first()) / 2), s.colour, t.colour,
                                s.orientation, s.region});
      } else {
        // A wide unclassified gap counts as a colour of its own.
        emit(ColourTransition{along(s, s.last()), s.colour, ColourClass::Unclassified,
                              s.orientation, s.region});
        emit(ColourTransition{along(t, t.first() - 1), ColourClass::Unclassified, t.colour,
                              t.orientation, t.region});
      }
    }
    const bool last_in_span = i + 1 == segs.size() || !same_span(t, segs[i + 1]);
    if (last_in_span && t.span_end - t.last() > max_gap)
      emit(ColourTransition{along(t, t.last()), t.colour, ColourClass::Unclassified,
                            t.orientation, t.region});
  }
}

}  // namespace detail

/**
 * Consecutive segments on the same scanline span emit a transition at the
 * midpoint between them when their gap is at most max_gap pixels. Wider gaps,
 * including those between a span end and its outermost segment, emit
 * transitions into and out of Unclassified at the segment ends.
 */
inline TransitionSet filter_transitions(const SegmentSet& segments, int max_gap) {
  TransitionSet out;
  auto emit = [&](const ColourTransition& t) { detail::bucket(out, t); };
  detail::pair_segments(segments.vertical, max_gap, emit);
  detail::pair_segments(segments.horizontal, max_gap, emit);
  return out;
}

/// True when some goal-rule transition exists among below-hull segments.
inline bool has_goal_evidence_below(const SegmentSet& segments, int max_gap) {
  bool found = false;
  auto emit = [&](const ColourTransition& t) {
    if (t.region == ScanRegion::BelowHull && t.involves(ColourClass::GoalYellow)) found = true;
  };
  detail::pair_segments(segments.vertical, max_gap, emit);
  if (!found) detail::pair_segments(segments.horizontal, max_gap, emit);
  return found;
}

}  // namespace fv
