/**
 * @file config.hpp
 *
 * Pipeline config document (JSON, version 1). Every section and field is
 * optional; missing values take the library defaults. Unknown fields are
 * errors so that typos do not silently fall back to defaults.
 *
 *   {
 *     "version": 1,
 *     "mode": "selective" | "rigid",
 *     "seed": 24301,
 *     "lut": null | "path/to/table.vlut",
 *     "stages": {"ball-detection": true, ...},
 *     "scan": {"vertical_spacing": 8, "horizontal_spacing": 8, "min_green_run": 3, "min_segment_length": 2},
 *     "ball": {"min_radius": 2.0, "gap_tolerance": 2, "seed_search": 8},
 *     "goal_ransac": {"iterations": 100, "threshold": 2.0, "min_consensus": 10, "max_models": 6},
 *     "goal": {"max_tilt_deg": 15.0, "min_post_width": 4.0, "max_post_width_fraction": 0.3333, "midline_samples": 9},
 *     "obstacle": {"alpha": 3, "min_drop": 5.0},
 *     "line_ransac": {"iterations": 100, "threshold": 2.0, "min_consensus": 10, "max_models": 12},
 *     "line": {"merge_angle_deg": 3.0, "max_line_width": 8.0}
 *   }
 *
 * The seed feeds both RANSAC generators (goal uses seed, lines seed + 1).
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fieldvision/controller/controller.hpp"

namespace fv::bench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct PipelineConfig {
  PipelineParams params;
  StagePlan plan;
  std::optional<std::string> lut_path;
  std::uint64_t seed = kDefaultSeed;

  /// Params with the seed applied to both RANSAC generators.
  PipelineParams resolved_params() const {
    PipelineParams p = params;
    p.goal_ransac.seed = seed;
    p.line_ransac.seed = seed + 1;
    return p;
  }
};

namespace detail {

class Reader {
 public:
  Reader(const nlohmann::json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("config: field '" + where() + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    const auto& v = obj_.at(key);
    const std::string field = qualify(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("config: field '" + field + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError("config: field '" + field + "' must be an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned())
        throw ConfigError("config: field '" + field + "' must be non-negative");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError("config: field '" + field + "' must be a number");
    } else {
      if (!v.is_string()) throw ConfigError("config: field '" + field + "' must be a string");
    }
    out = v.get<T>();
  }

  const nlohmann::json* section(const char* key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  std::string qualify(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!seen_.count(key)) throw ConfigError("config: unknown field '" + qualify(key) + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const nlohmann::json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

inline void read_ransac(const nlohmann::json& j, const std::string& name, RansacParams& r) {
  Reader rd(j, name);
  rd.read("iterations", r.iterations);
  rd.read("threshold", r.threshold);
  rd.read("min_consensus", r.min_consensus);
  rd.read("max_models", r.max_models);
  rd.finish();
}

inline nlohmann::json ransac_json(const RansacParams& r) {
  return {{"iterations", r.iterations},
          {"threshold", r.threshold},
          {"min_consensus", r.min_consensus},
          {"max_models", r.max_models}};
}

}  // namespace detail

inline PipelineConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
  if (!doc.contains("version")) throw ConfigError("config: field 'version' is required");
  if (!doc["version"].is_number_integer() || doc["version"].get<long long>() != 1)
    throw ConfigError("config: field 'version' must be 1");

  PipelineConfig c;
  detail::Reader root(doc, "");
  int version = 1;
  root.read("version", version);
  root.read("seed", c.seed);

  std::string mode = "selective";
  root.read("mode", mode);
  if (mode == "selective") {
    c.plan.mode = ControllerMode::Selective;
  } else if (mode == "rigid") {
    c.plan.mode = ControllerMode::Rigid;
  } else {
    throw ConfigError("config: field 'mode' must be \"selective\" or \"rigid\"");
  }

  if (const auto* lut = root.section("lut"); lut && !lut->is_null()) {
    if (!lut->is_string()) throw ConfigError("config: field 'lut' must be a path string or null");
    c.lut_path = lut->get<std::string>();
  }

  if (const auto* stages = root.section("stages")) {
    if (!stages->is_object()) throw ConfigError("config: field 'stages' must be an object");
    for (const auto& [key, value] : stages->items()) {
      const auto s = parse_stage(key);
      if (!s) throw ConfigError("config: unknown field 'stages." + key + "'");
      if (!value.is_boolean()) throw ConfigError("config: field 'stages." + key + "' must be a boolean");
      c.plan.set(*s, value.get<bool>());
    }
  }

  PipelineParams& p = c.params;
  if (const auto* j = root.section("scan")) {
    detail::Reader r(*j, "scan");
    r.read("vertical_spacing", p.scan.vertical_spacing);
    r.read("horizontal_spacing", p.scan.horizontal_spacing);
    r.read("min_green_run", p.scan.min_green_run);
    r.read("min_segment_length", p.scan.min_segment_length);
    r.finish();
  }
  if (const auto* j = root.section("ball")) {
    detail::Reader r(*j, "ball");
    r.read("min_radius", p.ball.min_radius);
    r.read("gap_tolerance", p.ball.gap_tolerance);
    r.read("seed_search", p.ball.seed_search);
    r.finish();
  }
  if (const auto* j = root.section("goal_ransac")) detail::read_ransac(*j, "goal_ransac", p.goal_ransac);
  if (const auto* j = root.section("goal")) {
    detail::Reader r(*j, "goal");
    r.read("max_tilt_deg", p.goal.max_tilt_deg);
    r.read("min_post_width", p.goal.min_post_width);
    r.read("max_post_width_fraction", p.goal.max_post_width_fraction);
    r.read("midline_samples", p.goal.midline_samples);
    r.finish();
  }
  if (const auto* j = root.section("obstacle")) {
    detail::Reader r(*j, "obstacle");
    r.read("alpha", p.obstacle.alpha);
    r.read("min_drop", p.obstacle.min_drop);
    r.finish();
  }
  if (const auto* j = root.section("line_ransac")) detail::read_ransac(*j, "line_ransac", p.line_ransac);
  if (const auto* j = root.section("line")) {
    detail::Reader r(*j, "line");
    r.read("merge_angle_deg", p.line.merge_angle_deg);
    r.read("max_line_width", p.line.max_line_width);
    r.finish();
  }
  root.finish();

  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  try {
    validate_plan(c.plan);
  } catch (const PlanError& e) {
    throw ConfigError(std::string("config: field 'stages': ") + e.what());
  }
  return c;
}

/// Canonical form: every field present, keys sorted.
inline nlohmann::json config_to_json(const PipelineConfig& c) {
  const PipelineParams& p = c.params;
  nlohmann::json stages = nlohmann::json::object();
  for (Stage s : kStageOrder) stages[std::string(stage_name(s))] = c.plan.is_enabled(s);
  return {
      {"version", 1},
      {"mode", c.plan.mode == ControllerMode::Rigid ? "rigid" : "selective"},
      {"seed", c.seed},
      {"lut", c.lut_path ? nlohmann::json(*c.lut_path) : nlohmann::json(nullptr)},
      {"stages", stages},
      {"scan",
       {{"vertical_spacing", p.scan.vertical_spacing},
        {"horizontal_spacing", p.scan.horizontal_spacing},
        {"min_green_run", p.scan.min_green_run},
        {"min_segment_length", p.scan.min_segment_length}}},
      {"ball",
       {{"min_radius", p.ball.min_radius},
        {"gap_tolerance", p.ball.gap_tolerance},
        {"seed_search", p.ball.seed_search}}},
      {"goal_ransac", detail::ransac_json(p.goal_ransac)},
      {"goal",
       {{"max_tilt_deg", p.goal.max_tilt_deg},
        {"min_post_width", p.goal.min_post_width},
        {"max_post_width_fraction", p.goal.max_post_width_fraction},
        {"midline_samples", p.goal.midline_samples}}},
      {"obstacle", {{"alpha", p.obstacle.alpha}, {"min_drop", p.obstacle.min_drop}}},
      {"line_ransac", detail::ransac_json(p.line_ransac)},
      {"line", {{"merge_angle_deg", p.line.merge_angle_deg}, {"max_line_width", p.line.max_line_width}}},
  };
}

/// FNV-1a over the canonical JSON dump, as 16 hex digits.
inline std::string config_fingerprint(const PipelineConfig& c) {
  const std::string text = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Loads a config file. A relative LUT path is resolved against the file's
/// directory.
inline PipelineConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path.string() + " is not valid JSON: " + e.what());
  }
  PipelineConfig c = config_from_json(doc);
  if (c.lut_path && std::filesystem::path(*c.lut_path).is_relative())
    c.lut_path = (path.parent_path() / *c.lut_path).lexically_normal().string();
  return c;
}

}  // namespace fv::bench
