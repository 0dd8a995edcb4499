/**
 * @file emit.hpp
 *
 * Writes rendered scenes as a replayable stream directory:
 *
 *   stream.json        manifest
 *   frame_NNNNN.ppm    frames
 *   truth.jsonl        one GroundTruth record per frame
 *   kinematics.jsonl   only when at least one scene carries kinematics
 *
 * truth.jsonl record:
 *   {"seq": n,
 *    "horizon": {"left_y": .., "right_y": ..},
 *    "ball": null | {"x": .., "y": .., "radius": .., "occlusion": .., "occluded_side": "left"},
 *    "posts": [{"base": [x, y], "left_x": .., "right_x": ..}],
 *    "obstacles": [{"left_x": .., "right_x": .., "base_y": ..}],
 *    "lines": [{"p0": [x, y], "p1": [x, y]}]}
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/platform/ppm.hpp"
#include "fieldvision/platform/stream.hpp"
#include "fieldvision/synthgen/presets.hpp"
#include "fieldvision/synthgen/scene.hpp"

namespace fv::synth {

inline constexpr const char* kTruthName = "truth.jsonl";

inline nlohmann::json truth_to_json(const GroundTruth& t) {
  nlohmann::json j;
  j["seq"] = t.seq;
  j["horizon"] = {{"left_y", t.horizon.left_y}, {"right_y", t.horizon.right_y}};
  if (t.ball) {
    j["ball"] = {{"x", t.ball->cx},
                 {"y", t.ball->cy},
                 {"radius", t.ball->radius},
                 {"occlusion", t.ball->occlusion},
                 {"occluded_side", side_name(t.ball->occluded_side)}};
  } else {
    j["ball"] = nullptr;
  }
  j["posts"] = nlohmann::json::array();
  for (const auto& p : t.posts)
    j["posts"].push_back({{"base", {p.base_x, p.base_y}}, {"left_x", p.left_x}, {"right_x", p.right_x}});
  j["obstacles"] = nlohmann::json::array();
  for (const auto& o : t.obstacles)
    j["obstacles"].push_back({{"left_x", o.left_x}, {"right_x", o.right_x}, {"base_y", o.base_y}});
  j["lines"] = nlohmann::json::array();
  for (const auto& l : t.lines) j["lines"].push_back({{"p0", {l.x0, l.y0}}, {"p1", {l.x1, l.y1}}});
  return j;
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
  GroundTruth t;
  t.seq = j.at("seq").get<std::uint64_t>();
  t.horizon.left_y = j.at("horizon").at("left_y").get<double>();
  t.horizon.right_y = j.at("horizon").at("right_y").get<double>();
  if (!j.at("ball").is_null()) {
    const auto& b = j.at("ball");
    BallTruth bt;
    bt.cx = b.at("x").get<double>();
    bt.cy = b.at("y").get<double>();
    bt.radius = b.at("radius").get<double>();
    bt.occlusion = b.at("occlusion").get<double>();
    bt.occluded_side = parse_side(b.at("occluded_side").get<std::string>()).value_or(Side::Left);
    t.ball = bt;
  }
  for (const auto& p : j.at("posts"))
    t.posts.push_back({p.at("base")[0].get<double>(), p.at("base")[1].get<int>(), p.at("left_x").get<int>(),
                       p.at("right_x").get<int>()});
  for (const auto& o : j.at("obstacles"))
    t.obstacles.push_back({o.at("left_x").get<int>(), o.at("right_x").get<int>(), o.at("base_y").get<int>()});
  for (const auto& l : j.at("lines"))
    t.lines.push_back({l.at("p0")[0].get<double>(), l.at("p0")[1].get<double>(), l.at("p1")[0].get<double>(),
                       l.at("p1")[1].get<double>()});
  return t;
}

inline std::vector<GroundTruth> read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<GroundTruth> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(truth_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// Scene documents for custom streams. Every field except the object lists is
// optional and defaults as in SceneSpec.

namespace detail {

inline Pixel pixel_from_json(const nlohmann::json& j) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != 3) throw SceneError("scene: colour must be [y, cb, cr]");
  for (int c : v)
    if (c < 0 || c > 255) throw SceneError("scene: colour channel out of range");
  return {static_cast<std::uint8_t>(v[0]), static_cast<std::uint8_t>(v[1]), static_cast<std::uint8_t>(v[2])};
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline SceneSpec scene_from_json(const nlohmann::json& j) {
  SceneSpec s;
  try {
    detail::read_opt(j, "width", s.width);
    detail::read_opt(j, "height", s.height);
    detail::read_opt(j, "seed", s.seed);
    detail::read_opt(j, "flip_probability", s.flip_probability);
    if (j.contains("horizon")) {
      detail::read_opt(j["horizon"], "left_y", s.horizon.left_y);
      detail::read_opt(j["horizon"], "right_y", s.horizon.right_y);
    }
    if (j.contains("ball") && !j["ball"].is_null()) {
      const auto& b = j["ball"];
      BallSpec ball;
      ball.cx = b.at("x").get<double>();
      ball.cy = b.at("y").get<double>();
      ball.radius = b.at("radius").get<double>();
      detail::read_opt(b, "occlusion", ball.occlusion);
      if (b.contains("occluded_side")) {
        const auto side = parse_side(b["occluded_side"].get<std::string>());
        if (!side) throw SceneError("scene: unknown occluded_side");
        ball.occluded_side = *side;
      }
      if (b.contains("occluder")) ball.occluder = detail::pixel_from_json(b["occluder"]);
      s.ball = ball;
    }
    for (const auto& p : j.value("posts", nlohmann::json::array()))
      s.posts.push_back({p.at("x").get<int>(), p.value("width", 16), p.at("top_y").get<int>(), p.at("base_y").get<int>()});
    for (const auto& o : j.value("obstacles", nlohmann::json::array()))
      s.obstacles.push_back({o.at("x0").get<int>(), o.at("x1").get<int>(), o.at("top_y").get<int>(),
                             o.at("base_y").get<int>()});
    for (const auto& l : j.value("lines", nlohmann::json::array()))
      s.lines.push_back({l.at("x0").get<double>(), l.at("y0").get<double>(), l.at("x1").get<double>(),
                         l.at("y1").get<double>(), l.value("width", 4.0)});
    for (const auto& c : j.value("clutter", nlohmann::json::array()))
      s.clutter.push_back({c.at("x0").get<int>(), c.at("y0").get<int>(), c.at("x1").get<int>(), c.at("y1").get<int>(),
                           c.contains("colour") ? detail::pixel_from_json(c["colour"]) : kBackground});
    if (j.contains("kinematics") && !j["kinematics"].is_null()) {
      KinematicsSpec k;
      detail::read_opt(j["kinematics"], "margin", k.margin);
      detail::read_opt(j["kinematics"], "pitch", k.pitch);
      detail::read_opt(j["kinematics"], "height", k.height);
      s.kinematics = k;
    }
  } catch (const nlohmann::json::exception& e) {
    throw SceneError(std::string("scene: ") + e.what());
  }
  validate_scene(s);
  return s;
}

/**
 * Custom stream document:
 *   {"version": 1, "name": "...", "fps": 30, "scenes": [scene, ...]}
 * or a single scene repeated with per-frame noise seeds:
 *   {"version": 1, "name": "...", "fps": 30, "scene": {...}, "count": N}
 */
struct SceneSequence {
  std::string name = "custom";
  double fps = 30.0;
  std::vector<SceneSpec> scenes;
};

inline SceneSequence sequence_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("version", 0) != 1) throw SceneError("scene file: field 'version' must be 1");
  SceneSequence seq;
  seq.name = j.value("name", std::string("custom"));
  seq.fps = j.value("fps", 30.0);
  if (!(seq.fps > 0)) throw SceneError("scene file: field 'fps' must be positive");
  if (j.contains("scenes")) {
    for (const auto& s : j["scenes"]) seq.scenes.push_back(scene_from_json(s));
  } else if (j.contains("scene")) {
    const SceneSpec base = scene_from_json(j["scene"]);
    const int count = j.value("count", 1);
    if (count < 0) throw SceneError("scene file: field 'count' must be >= 0");
    for (int i = 0; i < count; ++i) seq.scenes.push_back(base);
  } else {
    throw SceneError("scene file: needs 'scenes' or 'scene'");
  }
  return seq;
}

inline std::string frame_file_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%05zu.ppm", i);
  return buf;
}

/// Renders `count` scenes produced by `scene_at(i)` into `dir`.
inline platform::StreamManifest emit_stream(const std::function<SceneSpec(std::size_t)>& scene_at,
                                            std::size_t count, const std::filesystem::path& dir,
                                            const std::string& name, double fps = 30.0) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw platform::FrameReadError("cannot create directory " + dir.string());

  platform::StreamManifest manifest;
  manifest.name = name;
  manifest.fps = fps;
  std::ofstream truth(dir / kTruthName);
  std::ofstream kin;
  bool any_kinematics = false;
  for (std::size_t i = 0; i < count; ++i) {
    const SceneSpec spec = scene_at(i);
    if (i == 0) {
      manifest.width = spec.width;
      manifest.height = spec.height;
    } else if (spec.width != manifest.width || spec.height != manifest.height) {
      throw SceneError("scene " + std::to_string(i) + " has different dimensions from the first scene");
    }
    auto [frame, gt] = render_scene(spec, i);
    const std::string file = frame_file_name(i);
    platform::write_ppm(dir / file, frame);
    manifest.frames.push_back(file);
    truth << truth_to_json(gt).dump() << '\n';
    if (spec.kinematics) {
      if (!any_kinematics) kin.open(dir / platform::kKinematicsName);
      any_kinematics = true;
      kin << platform::kinematics_to_json(i, scene_kinematics(spec)).dump() << '\n';
    }
  }
  if (count == 0) {
    manifest.width = 640;
    manifest.height = 480;
  }
  if (!truth) throw platform::FrameReadError("failed writing " + (dir / kTruthName).string());
  std::ofstream out(dir / platform::kManifestName);
  out << platform::manifest_to_json(manifest).dump(2) << '\n';
  if (!out) throw platform::FrameReadError("failed writing manifest in " + dir.string());
  return manifest;
}

inline platform::StreamManifest emit_stream(const std::vector<SceneSpec>& scenes, const std::filesystem::path& dir,
                                            const std::string& name = "custom", double fps = 30.0) {
  return emit_stream([&](std::size_t i) { return scenes[i]; }, scenes.size(), dir, name, fps);
}

inline platform::StreamManifest emit_preset(std::string_view preset, std::size_t frames,
                                            const std::filesystem::path& dir, const PresetOptions& options = {}) {
  const PresetProfile* p = find_preset(preset);
  if (!p) throw SceneError("unknown preset '" + std::string(preset) + "'");
  return emit_stream([&](std::size_t i) { return preset_scene(*p, i, options); }, frames, dir, std::string(preset),
                     30.0);
}

}  // namespace fv::synth
