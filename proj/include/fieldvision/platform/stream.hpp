/**
 * @file stream.hpp
 *
 * On-disk stream layout:
 *
 *   <dir>/stream.json        {name, width, height, fps, frames: [file, ...]}
 *   <dir>/<file>             P6 frames, YCbCr in the RGB slots
 *   <dir>/kinematics.jsonl   optional, {seq, horizon: [a, b, c], pitch, height, valid}
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/core/types.hpp"
#include "fieldvision/platform/ppm.hpp"

namespace fv::platform {

inline constexpr const char* kManifestName = "stream.json";
inline constexpr const char* kKinematicsName = "kinematics.jsonl";

class StreamError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StreamManifest {
  std::string name;
  int width = 0;
  int height = 0;
  double fps = 30.0;
  std::vector<std::string> frames;
};

inline nlohmann::json manifest_to_json(const StreamManifest& m) {
  return {{"name", m.name}, {"width", m.width}, {"height", m.height}, {"fps", m.fps},
          {"frames", m.frames}};
}

inline StreamManifest manifest_from_json(const nlohmann::json& j) {
  StreamManifest m;
  try {
    m.name = j.at("name").get<std::string>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.fps = j.at("fps").get<double>();
    m.frames = j.at("frames").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw StreamError(std::string("malformed manifest: ") + e.what());
  }
  if (m.width < 2 || m.height < 2) throw StreamError("manifest dimensions must be at least 2x2");
  if (!(m.fps > 0.0)) throw StreamError("manifest fps must be positive");
  return m;
}

inline nlohmann::json kinematics_to_json(std::uint64_t seq, const KinematicsSnapshot& k) {
  return {{"seq", seq},
          {"horizon", {k.horizon.a(), k.horizon.b(), k.horizon.c()}},
          {"pitch", k.camera_pitch},
          {"height", k.camera_height},
          {"valid", k.valid}};
}

inline std::map<std::uint64_t, KinematicsSnapshot> read_kinematics(const std::filesystem::path& path) {
  std::map<std::uint64_t, KinematicsSnapshot> out;
  std::ifstream in(path);
  if (!in) throw StreamError("cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto h = j.at("horizon").get<std::vector<double>>();
      if (h.size() != 3) throw StreamError("horizon must have 3 coefficients");
      KinematicsSnapshot k;
      k.horizon = Line2::from_coefficients(h[0], h[1], h[2]);
      k.camera_pitch = j.at("pitch").get<double>();
      k.camera_height = j.at("height").get<double>();
      k.valid = j.at("valid").get<bool>();
      out[j.at("seq").get<std::uint64_t>()] = k;
    } catch (const std::exception& e) {
      throw StreamError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

/// Reads just enough of a P6 header to get its dimensions.
inline std::pair<int, int> ppm_dimensions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FrameReadError("cannot open " + path.string());
  std::string magic;
  long w = 0, h = 0;
  in >> magic;
  auto skip_comments = [&] {
    in >> std::ws;
    while (in.peek() == '#') {
      std::string ignored;
      std::getline(in, ignored);
      in >> std::ws;
    }
  };
  skip_comments();
  in >> w;
  skip_comments();
  in >> h;
  if (magic != "P6" || !in) throw FrameFormatError(path.string() + ": not a binary PPM (P6)");
  return {static_cast<int>(w), static_cast<int>(h)};
}

struct StreamOptions {
  bool check_frame_headers = true;
};

/// A parsed and validated stream directory.
struct StreamInfo {
  std::filesystem::path dir;
  StreamManifest manifest;
  bool has_kinematics = false;

  std::size_t frame_count() const { return manifest.frames.size(); }
  std::filesystem::path frame_path(std::size_t i) const { return dir / manifest.frames.at(i); }
};

/// Parses the manifest and checks that every listed frame exists and matches
/// the manifest dimensions.
inline StreamInfo open_stream(const std::filesystem::path& dir, const StreamOptions& options = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw StreamError("stream directory not found: " + dir.string());
  const fs::path manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) throw StreamError("missing manifest: " + manifest_path.string());
  StreamInfo info;
  info.dir = dir;
  {
    std::ifstream in(manifest_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw StreamError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    info.manifest = manifest_from_json(j);
  }
  for (const std::string& f : info.manifest.frames) {
    const fs::path p = dir / f;
    if (!fs::exists(p)) throw StreamError("manifest references missing frame file: " + p.string());
    if (options.check_frame_headers) {
      const auto [w, h] = ppm_dimensions(p);
      if (w != info.manifest.width || h != info.manifest.height)
        throw StreamError("frame " + p.string() + " is " + std::to_string(w) + "x" + std::to_string(h) +
                          ", manifest says " + std::to_string(info.manifest.width) + "x" +
                          std::to_string(info.manifest.height));
    }
  }
  info.has_kinematics = fs::exists(dir / kKinematicsName);
  return info;
}

}  // namespace fv::platform
