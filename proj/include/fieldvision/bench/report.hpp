/**
 * @file report.hpp
 *
 * Timing reports in the shape of a per-stream "mean (std)" ms/frame table,
 * and percentage comparisons between two reports.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fieldvision/bench/records.hpp"
#include "fieldvision/controller/controller.hpp"

namespace fv::bench {

struct StreamRow {
  std::string name;
  std::size_t frames = 0;   // distinct frames in the stream
  std::size_t samples = 0;  // frames times repetitions
  std::optional<double> mean_ms;
  std::optional<double> std_ms;
  std::array<std::optional<double>, kStageCount> stage_mean_ms{};  // over frames where the stage ran

  std::optional<double> fps() const {
    if (!mean_ms || *mean_ms <= 0.0) return std::nullopt;
    return 1000.0 / *mean_ms;
  }
};

struct BenchReport {
  std::string fingerprint;
  std::string mode;
  int repetitions = 1;
  std::vector<StreamRow> streams;
  StreamRow overall;
};

namespace detail {

inline StreamRow summarize_entries(const std::string& name, const std::vector<const FrameLogEntry*>& entries,
                                   std::size_t frames) {
  StreamRow row;
  row.name = name;
  row.frames = frames;
  row.samples = entries.size();
  std::vector<double> totals;
  totals.reserve(entries.size());
  std::array<double, kStageCount> stage_sum{};
  std::array<std::size_t, kStageCount> stage_n{};
  for (const FrameLogEntry* e : entries) {
    totals.push_back(static_cast<double>(e->total_ns) / 1e6);
    for (std::size_t s = 0; s < kStageCount; ++s)
      if (e->stage_ns[s]) {
        stage_sum[s] += static_cast<double>(*e->stage_ns[s]) / 1e6;
        ++stage_n[s];
      }
  }
  const StreamSummary summary = summarize_ms(totals);
  row.mean_ms = summary.mean_ms;
  row.std_ms = summary.std_ms;
  for (std::size_t s = 0; s < kStageCount; ++s)
    if (stage_n[s] > 0) row.stage_mean_ms[s] = stage_sum[s] / static_cast<double>(stage_n[s]);
  return row;
}

inline std::string fmt(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::string mean_std(const StreamRow& r) {
  if (!r.mean_ms) return "n/a";
  return fmt(*r.mean_ms) + " (" + (r.std_ms ? fmt(*r.std_ms) : std::string("n/a")) + ")";
}

inline std::string pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

inline nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
inline std::optional<double> opt_from(const nlohmann::json& j) {
  return j.is_null() ? std::nullopt : std::optional<double>(j.get<double>());
}

}  // namespace detail

/**
 * Builds a report from the per-frame log. Streams appear in the order given;
 * the overall row pools every sample, so its mean is the frame-weighted mean
 * of the stream means.
 */
inline BenchReport build_report(const std::vector<FrameLogEntry>& log, const std::vector<std::string>& stream_order,
                                std::string fingerprint, std::string mode, int repetitions) {
  BenchReport report;
  report.fingerprint = std::move(fingerprint);
  report.mode = std::move(mode);
  report.repetitions = repetitions;
  std::vector<const FrameLogEntry*> all;
  std::size_t all_frames = 0;
  for (const std::string& name : stream_order) {
    std::vector<const FrameLogEntry*> entries;
    std::set<std::uint64_t> seqs;
    for (const FrameLogEntry& e : log)
      if (e.stream == name) {
        entries.push_back(&e);
        seqs.insert(e.seq);
      }
    report.streams.push_back(detail::summarize_entries(name, entries, seqs.size()));
    all.insert(all.end(), entries.begin(), entries.end());
    all_frames += seqs.size();
  }
  report.overall = detail::summarize_entries("overall", all, all_frames);
  return report;
}

inline std::string report_table(const BenchReport& r) {
  using detail::pad;
  std::ostringstream out;
  const std::size_t w0 = 14, w1 = 8, w2 = 18, w3 = 9;
  out << pad("Image stream", w0) << "  " << pad("Frames", w1, true) << "  " << pad("ms/frame mean (std)", w2, true)
      << "  " << pad("fps", w3, true) << '\n';
  out << std::string(w0 + w1 + w2 + w3 + 6, '-') << '\n';
  auto row = [&](const StreamRow& s) {
    out << pad(s.name, w0) << "  " << pad(std::to_string(s.frames), w1, true) << "  "
        << pad(detail::mean_std(s), w2, true) << "  "
        << pad(s.fps() ? detail::fmt(*s.fps(), 1) : "n/a", w3, true) << '\n';
  };
  for (const auto& s : r.streams) row(s);
  out << std::string(w0 + w1 + w2 + w3 + 6, '-') << '\n';
  row(r.overall);
  out << '\n' << "Per-stage mean ms (frames where the stage ran)\n";
  out << pad("Image stream", w0);
  for (Stage s : kStageOrder) out << "  " << pad(std::string(stage_name(s)), 19, true);
  out << '\n';
  auto stage_row = [&](const StreamRow& s) {
    out << pad(s.name, w0);
    for (std::size_t i = 0; i < kStageCount; ++i)
      out << "  " << pad(s.stage_mean_ms[i] ? detail::fmt(*s.stage_mean_ms[i], 4) : "-", 19, true);
    out << '\n';
  };
  for (const auto& s : r.streams) stage_row(s);
  stage_row(r.overall);
  out << '\n'
      << "mode " << r.mode << ", repetitions " << r.repetitions << ", config " << r.fingerprint << '\n';
  return out.str();
}

inline nlohmann::json row_to_json(const StreamRow& s) {
  nlohmann::json stages = nlohmann::json::object();
  for (Stage st : kStageOrder) stages[std::string(stage_name(st))] = detail::opt_json(s.stage_mean_ms[stage_index(st)]);
  return {{"name", s.name},
          {"frames", s.frames},
          {"samples", s.samples},
          {"mean_ms", detail::opt_json(s.mean_ms)},
          {"std_ms", detail::opt_json(s.std_ms)},
          {"fps", detail::opt_json(s.fps())},
          {"stages", stages}};
}

inline StreamRow row_from_json(const nlohmann::json& j) {
  StreamRow s;
  s.name = j.at("name").get<std::string>();
  s.frames = j.at("frames").get<std::size_t>();
  s.samples = j.at("samples").get<std::size_t>();
  s.mean_ms = detail::opt_from(j.at("mean_ms"));
  s.std_ms = detail::opt_from(j.at("std_ms"));
  for (Stage st : kStageOrder)
    if (j.contains("stages") && j["stages"].contains(std::string(stage_name(st))))
      s.stage_mean_ms[stage_index(st)] = detail::opt_from(j["stages"][std::string(stage_name(st))]);
  return s;
}

inline nlohmann::json report_to_json(const BenchReport& r) {
  nlohmann::json streams = nlohmann::json::array();
  for (const auto& s : r.streams) streams.push_back(row_to_json(s));
  return {{"version", 1},
          {"fingerprint", r.fingerprint},
          {"mode", r.mode},
          {"repetitions", r.repetitions},
          {"streams", streams},
          {"overall", row_to_json(r.overall)}};
}

inline BenchReport report_from_json(const nlohmann::json& j) {
  BenchReport r;
  try {
    r.fingerprint = j.at("fingerprint").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.repetitions = j.at("repetitions").get<int>();
    for (const auto& s : j.at("streams")) r.streams.push_back(row_from_json(s));
    r.overall = row_from_json(j.at("overall"));
  } catch (const nlohmann::json::exception& e) {
    throw RecordError(std::string("malformed bench report: ") + e.what());
  }
  return r;
}

// Comparison -----------------------------------------------------------------

class CompareError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CompareRow {
  std::string name;
  double a_mean_ms = 0.0;
  double b_mean_ms = 0.0;
  double delta_pct = 0.0;  // (b - a) / a
  double a_fps = 0.0;
  double b_fps = 0.0;
};

inline CompareRow compare_means(const std::string& name, double a_ms, double b_ms) {
  if (!(a_ms > 0.0) || !(b_ms > 0.0)) throw CompareError("stream '" + name + "' has a non-positive mean");
  return {name, a_ms, b_ms, (b_ms - a_ms) / a_ms * 100.0, 1000.0 / a_ms, 1000.0 / b_ms};
}

/// Per-stream and overall deltas; both reports must cover the same streams.
inline std::vector<CompareRow> compare_reports(const BenchReport& a, const BenchReport& b) {
  std::set<std::string> na, nb;
  for (const auto& s : a.streams) na.insert(s.name);
  for (const auto& s : b.streams) nb.insert(s.name);
  if (na != nb) {
    std::string only_a, only_b;
    for (const auto& n : na)
      if (!nb.count(n)) only_a += " " + n;
    for (const auto& n : nb)
      if (!na.count(n)) only_b += " " + n;
    throw CompareError("reports cover different streams (only in A:" + (only_a.empty() ? " -" : only_a) +
                       "; only in B:" + (only_b.empty() ? " -" : only_b) + ")");
  }
  std::vector<CompareRow> rows;
  for (const auto& sa : a.streams) {
    const auto& sb = *std::find_if(b.streams.begin(), b.streams.end(), [&](const auto& s) { return s.name == sa.name; });
    if (!sa.mean_ms || !sb.mean_ms) throw CompareError("stream '" + sa.name + "' has no mean");
    rows.push_back(compare_means(sa.name, *sa.mean_ms, *sb.mean_ms));
  }
  if (!a.overall.mean_ms || !b.overall.mean_ms) throw CompareError("overall row has no mean");
  rows.push_back(compare_means("overall", *a.overall.mean_ms, *b.overall.mean_ms));
  return rows;
}

inline std::string compare_table(const std::vector<CompareRow>& rows) {
  using detail::fmt;
  using detail::pad;
  std::ostringstream out;
  out << pad("Image stream", 14) << "  " << pad("A ms", 9, true) << "  " << pad("B ms", 9, true) << "  "
      << pad("change", 8, true) << "  " << pad("A fps", 8, true) << "  " << pad("B fps", 8, true) << '\n';
  for (const auto& r : rows) {
    const std::string delta = (r.delta_pct >= 0 ? "+" : "") + fmt(r.delta_pct, 1) + "%";
    out << pad(r.name, 14) << "  " << pad(fmt(r.a_mean_ms), 9, true) << "  " << pad(fmt(r.b_mean_ms), 9, true) << "  "
        << pad(delta, 8, true) << "  " << pad(fmt(r.a_fps, 1), 8, true) << "  " << pad(fmt(r.b_fps, 1), 8, true)
        << '\n';
  }
  return out.str();
}

inline nlohmann::json compare_to_json(const std::vector<CompareRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"name", r.name},
                   {"a_mean_ms", r.a_mean_ms},
                   {"b_mean_ms", r.b_mean_ms},
                   {"delta_pct", r.delta_pct},
                   {"a_fps", r.a_fps},
                   {"b_fps", r.b_fps}});
  return {{"version", 1}, {"rows", arr}};
}

}  // namespace fv::bench
