/**
 * @file types.hpp
 *
 * Value types shared by every stage of the pipeline: frames, colour classes
 * and image-space geometry.
 *
 * Image coordinates follow the usual raster convention: x is the column
 * (0 at the left), y is the row (0 at the top), so "above" means smaller y.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fv {

enum class ColourClass : std::uint8_t {
  Unclassified = 0,
  FieldGreen = 1,
  BallOrange = 2,
  GoalYellow = 3,
  LineWhite = 4,
};

inline constexpr std::size_t kColourClassCount = 5;

inline constexpr std::array<ColourClass, kColourClassCount> kAllColourClasses = {
    ColourClass::Unclassified, ColourClass::FieldGreen, ColourClass::BallOrange,
    ColourClass::GoalYellow, ColourClass::LineWhite};

constexpr std::string_view colour_name(ColourClass c) {
  switch (c) {
    case ColourClass::Unclassified: return "Unclassified";
    case ColourClass::FieldGreen: return "FieldGreen";
    case ColourClass::BallOrange: return "BallOrange";
    case ColourClass::GoalYellow: return "GoalYellow";
    case ColourClass::LineWhite: return "LineWhite";
  }
  return "Unclassified";
}

inline std::optional<ColourClass> parse_colour(std::string_view name) {
  for (ColourClass c : kAllColourClasses)
    if (colour_name(c) == name) return c;
  return std::nullopt;
}

/// Class code as stored in the binary LUT format; nullopt for codes > 4.
constexpr std::optional<ColourClass> colour_from_code(std::uint8_t code) {
  if (code >= kColourClassCount) return std::nullopt;
  return static_cast<ColourClass>(code);
}

struct Pixel {
  std::uint8_t y = 0;   // luma
  std::uint8_t cb = 0;  // chroma blue
  std::uint8_t cr = 0;  // chroma red

  friend constexpr bool operator==(const Pixel&, const Pixel&) = default;
};

struct Point2 {
  int x = 0;
  int y = 0;

  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

/// Thrown when a value type is constructed in violation of its invariants.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * A timestamped YCbCr raster. Pixel storage is row-major, one Pixel per
 * sample. Construction enforces width, height >= 2 and an exact pixel count.
 */
class Frame {
 public:
  Frame() = default;

  Frame(int width, int height, std::vector<Pixel> pixels, std::uint64_t sequence_index = 0,
        std::uint64_t timestamp_us = 0)
      : width_(width),
        height_(height),
        pixels_(std::move(pixels)),
        sequence_index_(sequence_index),
        timestamp_us_(timestamp_us) {
    if (width < 2 || height < 2)
      throw InvalidArgument("frame dimensions must be at least 2x2, got " +
                            std::to_string(width) + "x" + std::to_string(height));
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
      throw InvalidArgument("frame pixel count " + std::to_string(pixels_.size()) +
                            " does not match " + std::to_string(width) + "x" +
                            std::to_string(height));
  }

  /// A frame filled with a single colour.
  static Frame filled(int width, int height, Pixel fill, std::uint64_t sequence_index = 0) {
    if (width < 2 || height < 2)
      throw InvalidArgument("frame dimensions must be at least 2x2");
    return Frame(width, height,
                 std::vector<Pixel>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                                    fill),
                 sequence_index);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint64_t sequence_index() const { return sequence_index_; }
  std::uint64_t timestamp_us() const { return timestamp_us_; }

  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool contains(Point2 p) const { return contains(p.x, p.y); }

  const Pixel& at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  Pixel& at(int x, int y) {
    return pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }

  const std::vector<Pixel>& pixels() const { return pixels_; }

  void set_sequence(std::uint64_t sequence_index, std::uint64_t timestamp_us) {
    sequence_index_ = sequence_index;
    timestamp_us_ = timestamp_us;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Pixel> pixels_;
  std::uint64_t sequence_index_ = 0;
  std::uint64_t timestamp_us_ = 0;
};

/**
 * A line in normal form a*x + b*y + c = 0 with a^2 + b^2 = 1 and the first
 * nonzero of (a, b) positive, which makes the representation unique.
 */
class Line2 {
 public:
  Line2() = default;

  static Line2 from_coefficients(double a, double b, double c) {
    const double norm = std::hypot(a, b);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw InvalidArgument("line normal must be nonzero and finite");
    a /= norm;
    b /= norm;
    c /= norm;
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
      a = -a;
      b = -b;
      c = -c;
    }
    // Avoid -0.0 leaking into serialised output.
    if (a == 0.0) a = 0.0;
    if (b == 0.0) b = 0.0;
    if (c == 0.0) c = 0.0;
    Line2 l;
    l.a_ = a;
    l.b_ = b;
    l.c_ = c;
    return l;
  }

  static Line2 through(double x0, double y0, double x1, double y1) {
    return from_coefficients(y0 - y1, x1 - x0, x0 * y1 - x1 * y0);
  }
  static Line2 through(Point2 p, Point2 q) { return through(p.x, p.y, q.x, q.y); }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

  double signed_distance(double x, double y) const { return a_ * x + b_ * y + c_; }

  /// Unit direction vector along the line.
  std::pair<double, double> direction() const { return {-b_, a_}; }

  /// Angle between the line and the image y axis, radians in [0, pi/2].
  double angle_from_vertical() const { return std::asin(std::min(1.0, std::fabs(b_))); }

  /// Row-wise x at the given y; nullopt for horizontal lines.
  std::optional<double> x_at(double y) const {
    if (a_ == 0.0) return std::nullopt;
    return -(b_ * y + c_) / a_;
  }
  std::optional<double> y_at(double x) const {
    if (b_ == 0.0) return std::nullopt;
    return -(a_ * x + c_) / b_;
  }

  friend bool operator==(const Line2&, const Line2&) = default;

 private:
  double a_ = 0.0;
  double b_ = 1.0;
  double c_ = 0.0;
};

inline double point_line_distance(double x, double y, const Line2& l) {
  return std::fabs(l.signed_distance(x, y));
}
inline double point_line_distance(Point2 p, const Line2& l) {
  return point_line_distance(p.x, p.y, l);
}

/// Smallest angle between two undirected lines, radians in [0, pi/2].
inline double line_angle_between(const Line2& l, const Line2& m) {
  const double dot = std::fabs(l.a() * m.a() + l.b() * m.b());
  return std::acos(std::min(1.0, dot));
}

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Per-frame kinematic data captured alongside a frame. When invalid, the
/// horizon is treated as the top edge of the image.
struct KinematicsSnapshot {
  Line2 horizon = Line2::from_coefficients(0.0, 1.0, 0.0);
  double camera_pitch = 0.0;   // radians, downward positive
  double camera_height = 0.0;  // metres above ground
  bool valid = false;

  friend bool operator==(const KinematicsSnapshot&, const KinematicsSnapshot&) = default;
};

/// First row to scan in column x: the kinematic horizon when valid, clamped
/// to the frame; row 0 otherwise.
inline int horizon_start_row(const KinematicsSnapshot& k, int x, int height) {
  if (!k.valid) return 0;
  const auto y = k.horizon.y_at(x);
  if (!y || !std::isfinite(*y)) return 0;
  const double row = std::ceil(*y - 1e-9);
  if (row <= 0.0) return 0;
  if (row >= height - 1) return height - 1;
  return static_cast<int>(row);
}

/// A frame paired with the kinematics captured at the same time.
struct FrameInput {
  Frame frame;
  KinematicsSnapshot kinematics;
};

}  // namespace fv
