/**
 * @file records.hpp
 *
 * JSON-lines records written by `run` and `bench`.
 *
 * Detection record (no timings, so identical runs give identical bytes):
 *   {"seq": n,
 *    "status": {"green-horizon": "ok", ...},
 *    "balls": null | [{"centre": [x, y], "radius": r, "occluded": ["left", ...], "support": n}],
 *    "goalposts": null | [{"base": [x, y], "width": w, "left_edge": [a, b, c], "right_edge": [a, b, c]}],
 *    "obstacles": null | [{"left_x": .., "right_x": .., "base": [x, y], "scans": n}],
 *    "lines": null | [{"line": [a, b, c], "p0": [x, y], "p1": [x, y], "inliers": n}]}
 * A null list means the stage did not finish ok for that frame.
 *
 * Frame report record:
 *   {"stream": name, "rep": r, "seq": n, "timestamp_us": t, "total_ns": ns,
 *    "stages": {"green-horizon": {"status": "ok", "ns": ns | null}, ...}}
 */

#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/controller/controller.hpp"

namespace fv::bench {

class RecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline nlohmann::json point_json(Point2 p) { return {p.x, p.y}; }
inline nlohmann::json line_json(const Line2& l) { return {l.a(), l.b(), l.c()}; }
inline Point2 point_from(const nlohmann::json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }
inline Line2 line_from(const nlohmann::json& j) {
  return Line2::from_coefficients(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

}  // namespace detail

struct DetectionRecord {
  std::uint64_t seq = 0;
  std::array<StageStatus, kStageCount> status{};
  DetectionSet detections;
};

inline nlohmann::json detections_to_json(std::uint64_t seq, const std::array<StageStatus, kStageCount>& status,
                                         const DetectionSet& d) {
  using detail::line_json;
  using detail::point_json;
  nlohmann::json j;
  j["seq"] = seq;
  nlohmann::json st = nlohmann::json::object();
  for (Stage s : kStageOrder) st[std::string(stage_name(s))] = std::string(status_name(status[stage_index(s)]));
  j["status"] = st;

  auto list = [](const auto& opt, auto&& fn) {
    if (!opt) return nlohmann::json(nullptr);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : *opt) arr.push_back(fn(v));
    return arr;
  };
  j["balls"] = list(d.balls, [](const BallDetection& b) {
    nlohmann::json occ = nlohmann::json::array();
    for (BallEdge e : {BallEdge::Top, BallEdge::Bottom, BallEdge::Left, BallEdge::Right})
      if (b.is_occluded(e)) occ.push_back(std::string(edge_name(e)));
    return nlohmann::json{{"centre", point_json(b.centre)}, {"radius", b.radius}, {"occluded", occ},
                          {"support", b.support}};
  });
  j["goalposts"] = list(d.goalposts, [](const Goalpost& g) {
    return nlohmann::json{{"base", point_json(g.base)}, {"width", g.width}, {"left_edge", line_json(g.left_edge)},
                          {"right_edge", line_json(g.right_edge)}};
  });
  j["obstacles"] = list(d.obstacles, [](const Obstacle& o) {
    return nlohmann::json{{"left_x", o.left_x}, {"right_x", o.right_x}, {"base", point_json(o.base)},
                          {"scans", o.scan_count}};
  });
  j["lines"] = list(d.lines, [](const FieldLine& l) {
    return nlohmann::json{{"line", line_json(l.line)}, {"p0", point_json(l.first)}, {"p1", point_json(l.second)},
                          {"inliers", l.inliers}};
  });
  return j;
}

inline nlohmann::json detections_to_json(const FrameReport& r) {
  return detections_to_json(r.sequence_index, r.status, r.detections);
}

inline DetectionRecord detections_from_json(const nlohmann::json& j) {
  using detail::line_from;
  using detail::point_from;
  DetectionRecord rec;
  rec.seq = j.at("seq").get<std::uint64_t>();
  for (const auto& [key, value] : j.at("status").items()) {
    const auto s = parse_stage(key);
    const auto st = parse_status(value.get<std::string>());
    if (!s || !st) throw RecordError("bad status entry '" + key + "'");
    rec.status[stage_index(*s)] = *st;
  }
  auto list = [&](const char* key, auto& out, auto&& fn) {
    const auto& v = j.at(key);
    if (v.is_null()) return;
    out.emplace();
    for (const auto& e : v) out->push_back(fn(e));
  };
  list("balls", rec.detections.balls, [](const nlohmann::json& e) {
    BallDetection b;
    b.centre = point_from(e.at("centre"));
    b.radius = e.at("radius").get<double>();
    for (const auto& o : e.at("occluded")) {
      for (BallEdge edge : {BallEdge::Top, BallEdge::Bottom, BallEdge::Left, BallEdge::Right})
        if (edge_name(edge) == o.get<std::string>()) b.occluded[static_cast<std::size_t>(edge)] = true;
    }
    b.support = e.at("support").get<int>();
    return b;
  });
  list("goalposts", rec.detections.goalposts, [](const nlohmann::json& e) {
    return Goalpost{line_from(e.at("left_edge")), line_from(e.at("right_edge")), point_from(e.at("base")),
                    e.at("width").get<double>()};
  });
  list("obstacles", rec.detections.obstacles, [](const nlohmann::json& e) {
    Obstacle o;
    o.left_x = e.at("left_x").get<int>();
    o.right_x = e.at("right_x").get<int>();
    o.base = point_from(e.at("base"));
    o.scan_count = e.at("scans").get<int>();
    return o;
  });
  list("lines", rec.detections.lines, [](const nlohmann::json& e) {
    FieldLine l;
    l.line = line_from(e.at("line"));
    l.first = point_from(e.at("p0"));
    l.second = point_from(e.at("p1"));
    l.inliers = e.at("inliers").get<int>();
    return l;
  });
  return rec;
}

inline std::vector<DetectionRecord> read_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RecordError("cannot open " + path.string());
  std::vector<DetectionRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(detections_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw RecordError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

inline nlohmann::json frame_report_to_json(const FrameReport& r, const std::string& stream, int rep) {
  nlohmann::json stages = nlohmann::json::object();
  for (Stage s : kStageOrder) {
    const auto& ns = r.duration_ns[stage_index(s)];
    stages[std::string(stage_name(s))] = {{"status", std::string(status_name(r.status_of(s)))},
                                          {"ns", ns ? nlohmann::json(*ns) : nlohmann::json(nullptr)}};
  }
  return {{"stream", stream}, {"rep", rep},           {"seq", r.sequence_index}, {"timestamp_us", r.timestamp_us},
          {"total_ns", r.total_ns}, {"stages", stages}};
}

/// One row of the per-frame timing log, as read back for recomputation.
struct FrameLogEntry {
  std::string stream;
  int rep = 0;
  std::uint64_t seq = 0;
  std::int64_t total_ns = 0;
  std::array<std::optional<std::int64_t>, kStageCount> stage_ns{};
};

inline std::vector<FrameLogEntry> read_frame_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw RecordError("cannot open " + path.string());
  std::vector<FrameLogEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line);
    FrameLogEntry e;
    e.stream = j.at("stream").get<std::string>();
    e.rep = j.at("rep").get<int>();
    e.seq = j.at("seq").get<std::uint64_t>();
    e.total_ns = j.at("total_ns").get<std::int64_t>();
    for (Stage s : kStageOrder) {
      const auto& ns = j.at("stages").at(std::string(stage_name(s))).at("ns");
      if (!ns.is_null()) e.stage_ns[stage_index(s)] = ns.get<std::int64_t>();
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace fv::bench
