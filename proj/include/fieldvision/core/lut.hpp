/**
 * @file lut.hpp
 *
 * Dense colour classification table over 6-bit-per-channel YCbCr buckets,
 * built from an ordered list of inclusive range rules.
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fieldvision/core/types.hpp"

namespace fv {

inline constexpr int kLutBitsPerChannel = 6;
inline constexpr int kLutShift = 8 - kLutBitsPerChannel;
inline constexpr std::size_t kLutChannelBuckets = std::size_t{1} << kLutBitsPerChannel;
inline constexpr std::size_t kLutEntries = kLutChannelBuckets * kLutChannelBuckets * kLutChannelBuckets;
inline constexpr std::uint8_t kLutFormatVersion = 1;

constexpr std::size_t lut_index(Pixel p) {
  return (static_cast<std::size_t>(p.y >> kLutShift) << (2 * kLutBitsPerChannel)) |
         (static_cast<std::size_t>(p.cb >> kLutShift) << kLutBitsPerChannel) |
         static_cast<std::size_t>(p.cr >> kLutShift);
}

/// Centre of an 8-bit bucket in channel units, e.g. bucket 0 spans 0..3 and
/// has centre 1.5.
constexpr double bucket_centre(std::size_t bucket) {
  return static_cast<double>(bucket << kLutShift) + ((1 << kLutShift) - 1) / 2.0;
}

struct ChannelRange {
  int min = 0;
  int max = 255;

  constexpr bool contains(double v) const { return v >= min && v <= max; }
  friend constexpr bool operator==(const ChannelRange&, const ChannelRange&) = default;
};

struct ColourRule {
  ColourClass colour = ColourClass::Unclassified;
  ChannelRange luma;
  ChannelRange cb;
  ChannelRange cr;

  constexpr bool contains(double y, double u, double v) const {
    return luma.contains(y) && cb.contains(u) && cr.contains(v);
  }
  friend constexpr bool operator==(const ColourRule&, const ColourRule&) = default;
};

class LutFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ColourLUT {
 public:
  /// All entries Unclassified.
  ColourLUT() : entries_(kLutEntries, ColourClass::Unclassified) {}

  ColourClass classify(Pixel p) const { return entries_[lut_index(p)]; }
  ColourClass entry(std::size_t index) const { return entries_.at(index); }
  std::size_t size() const { return entries_.size(); }

  /// VLUT binary layout: "VLUT", version byte, bits-per-channel byte, then
  /// one class code per entry.
  std::vector<std::uint8_t> serialize() const {
    std::vector<std::uint8_t> out;
    out.reserve(6 + kLutEntries);
    out.insert(out.end(), {'V', 'L', 'U', 'T', kLutFormatVersion,
                           static_cast<std::uint8_t>(kLutBitsPerChannel)});
    for (ColourClass c : entries_) out.push_back(static_cast<std::uint8_t>(c));
    return out;
  }

  static ColourLUT deserialize(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 6 || bytes[0] != 'V' || bytes[1] != 'L' || bytes[2] != 'U' || bytes[3] != 'T')
      throw LutFormatError("missing VLUT magic");
    if (bytes[4] != kLutFormatVersion)
      throw LutFormatError("unsupported LUT version " + std::to_string(bytes[4]));
    if (bytes[5] != kLutBitsPerChannel)
      throw LutFormatError("unsupported LUT bits per channel " + std::to_string(bytes[5]));
    if (bytes.size() != 6 + kLutEntries)
      throw LutFormatError("LUT payload has " + std::to_string(bytes.size() - 6) +
                           " entries, expected " + std::to_string(kLutEntries));
    ColourLUT lut;
    for (std::size_t i = 0; i < kLutEntries; ++i) {
      const auto c = colour_from_code(bytes[6 + i]);
      if (!c) throw LutFormatError("invalid class code at entry " + std::to_string(i));
      lut.entries_[i] = *c;
    }
    return lut;
  }

  friend bool operator==(const ColourLUT&, const ColourLUT&) = default;

 private:
  friend ColourLUT build_lut(std::span<const ColourRule> rules);
  std::vector<ColourClass> entries_;
};

inline ColourClass classify_pixel(const ColourLUT& lut, Pixel p) { return lut.classify(p); }

/// Validates rule ranges; throws InvalidArgument naming the first bad rule.
inline void validate_rules(std::span<const ColourRule> rules) {
  auto check = [](const ChannelRange& r, std::size_t i, const char* channel) {
    if (r.min > r.max)
      throw InvalidArgument("rule " + std::to_string(i) + ": " + channel + " min " +
                            std::to_string(r.min) + " exceeds max " + std::to_string(r.max));
  };
  for (std::size_t i = 0; i < rules.size(); ++i) {
    check(rules[i].luma, i, "luma");
    check(rules[i].cb, i, "cb");
    check(rules[i].cr, i, "cr");
  }
}

/// Each cell takes the class of the first rule containing its bucket centre.
inline ColourLUT build_lut(std::span<const ColourRule> rules) {
  validate_rules(rules);
  ColourLUT lut;
  if (rules.empty()) return lut;
  for (std::size_t yb = 0; yb < kLutChannelBuckets; ++yb) {
    const double yc = bucket_centre(yb);
    for (std::size_t ub = 0; ub < kLutChannelBuckets; ++ub) {
      const double uc = bucket_centre(ub);
      for (std::size_t vb = 0; vb < kLutChannelBuckets; ++vb) {
        const double vc = bucket_centre(vb);
        const auto hit = std::find_if(rules.begin(), rules.end(), [&](const ColourRule& r) {
          return r.contains(yc, uc, vc);
        });
        if (hit != rules.end())
          lut.entries_[(yb << (2 * kLutBitsPerChannel)) | (ub << kLutBitsPerChannel) | vb] =
              hit->colour;
      }
    }
  }
  return lut;
}

/**
 * Paint colours used by the scene generator. Each one sits well inside its
 * default rule, so a noise-free rendered pixel always classifies exactly.
 */
namespace paint {
inline constexpr Pixel kGreen{110, 58, 62};
inline constexpr Pixel kOrange{142, 58, 210};
inline constexpr Pixel kYellow{202, 50, 142};
inline constexpr Pixel kWhite{230, 130, 126};
inline constexpr Pixel kObstacle{42, 130, 126};
}  // namespace paint

/// The default field rules: green, orange, yellow and white, first match wins.
inline std::vector<ColourRule> default_field_rules() {
  return {
      {ColourClass::FieldGreen, {50, 170}, {0, 100}, {0, 100}},
      {ColourClass::BallOrange, {70, 200}, {0, 110}, {170, 255}},
      {ColourClass::GoalYellow, {150, 255}, {0, 100}, {120, 165}},
      {ColourClass::LineWhite, {190, 255}, {112, 144}, {112, 144}},
  };
}

inline std::shared_ptr<const ColourLUT> default_lut() {
  static const auto lut = std::make_shared<const ColourLUT>(build_lut(default_field_rules()));
  return lut;
}

}  // namespace fv
