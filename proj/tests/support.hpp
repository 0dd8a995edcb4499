#pragma once

#include <algorithm>
#include <atomic>
#include <unistd.h>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fieldvision/core/lut.hpp"
#include "fieldvision/core/types.hpp"

namespace fvtest {

using namespace fv;

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "fv") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& s) const { return path_ / s; }

 private:
  std::filesystem::path path_;
};

/// Classifies as Unclassified under the default rules.
inline constexpr Pixel kBackgroundForTests{120, 150, 110};

inline void paint_rect(Frame& f, int x0, int y0, int x1, int y1, Pixel c) {
  for (int y = std::max(0, y0); y <= std::min(f.height() - 1, y1); ++y)
    for (int x = std::max(0, x0); x <= std::min(f.width() - 1, x1); ++x) f.at(x, y) = c;
}

inline void paint_disc(Frame& f, double cx, double cy, double r, Pixel c) {
  for (int y = 0; y < f.height(); ++y)
    for (int x = 0; x < f.width(); ++x)
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) f.at(x, y) = c;
}

/// Exhaustive consensus: the best line through any two distinct points.
struct OracleLine {
  Line2 line;
  int consensus = 0;
};

inline OracleLine brute_force_best_line(const std::vector<Point2>& pts, double threshold) {
  OracleLine best;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (pts[i] == pts[j]) continue;
      const Line2 l = Line2::through(pts[i], pts[j]);
      int n = 0;
      for (const Point2& p : pts)
        if (std::abs(l.a() * p.x + l.b() * p.y + l.c()) <= threshold) ++n;
      if (n > best.consensus) best = {l, n};
    }
  return best;
}

/// Offset between two lines measured at a reference point on the first.
inline double offset_at(const Line2& truth, const Line2& fit, double x_ref, double y_ref) {
  // Project the reference point onto the truth line, then measure to fit.
  const double d = truth.signed_distance(x_ref, y_ref);
  const double px = x_ref - d * truth.a(), py = y_ref - d * truth.b();
  return std::abs(fit.signed_distance(px, py));
}

/// A frame of random classes drawn from the paint palette, in blocks so that
/// runs of every length appear.
inline Frame random_class_frame(std::mt19937_64& rng, int w, int h) {
  static constexpr Pixel palette[] = {paint::kGreen, paint::kOrange, paint::kYellow, paint::kWhite,
                                      paint::kObstacle};
  Frame f = Frame::filled(w, h, paint::kGreen);
  std::uniform_int_distribution<int> pick(0, 4), len(1, 6);
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const int n = len(rng);
      const Pixel c = palette[pick(rng)];
      for (int k = 0; k < n && x < w; ++k, ++x) f.at(x, y) = c;
    }
  }
  return f;
}

}  // namespace fvtest
