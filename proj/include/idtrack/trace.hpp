#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "idtrack/config.hpp"
#include "idtrack/control.hpp"
#include "idtrack/fusion.hpp"
#include "idtrack/metrics.hpp"
#include "idtrack/world.hpp"

namespace idtrack {

inline constexpr int kTraceSchemaVersion = 1;

/// Everything logged for one simulated frame.
struct TraceFrame {
  double t = 0.0;
  Pose2D robot;
  std::vector<FrameRecord::GroundTruth> ground_truth;
  std::vector<TrackDetection> tracks;
  std::vector<FaceObservation> faces;
  std::vector<IdentifiedPerson> output;
  ControlCommand command;
};

/// Leading metadata line of a trace file.
struct TraceHeader {
  int schema_version = kTraceSchemaVersion;
  std::string scenario;
  std::string method;
  std::uint64_t seed = 0;
  double frame_rate = kFrameRate;
  double duration = 0.0;
  std::optional<std::string> target;
  MetricThresholds thresholds;
};

namespace detail {

inline IdentitySource source_from_string(const std::string& s) {
  if (s == "face") return IdentitySource::FaceMatched;
  if (s == "memory") return IdentitySource::MemoryCarried;
  if (s == "none") return IdentitySource::Unidentified;
  throw io_error("unknown identity source '" + s + "'");
}

}  // namespace detail

inline nlohmann::json to_json(const TraceHeader& h) {
  nlohmann::json j{{"schema_version", h.schema_version},
                   {"scenario", h.scenario},
                   {"method", h.method},
                   {"seed", h.seed},
                   {"frame_rate", h.frame_rate},
                   {"duration", h.duration},
                   {"d_match", h.thresholds.d_match},
                   {"clearmot_threshold", h.thresholds.clearmot_threshold}};
  j["target"] = h.target ? nlohmann::json(*h.target) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const TraceFrame& f) {
  nlohmann::json j;
  j["t"] = f.t;
  j["robot"] = {{"x", f.robot.x},
                {"y", f.robot.y},
                {"heading", f.robot.heading.radians()}};
  auto& gt = j["gt"] = nlohmann::json::array();
  for (const auto& g : f.ground_truth)
    gt.push_back({{"name", g.name}, {"x", g.position.x}, {"y", g.position.y}});
  auto& tracks = j["tracks"] = nlohmann::json::array();
  for (const auto& d : f.tracks)
    tracks.push_back({{"id", d.track_id},
                      {"x", d.position.x},
                      {"y", d.position.y},
                      {"z", d.position.z}});
  auto& faces = j["faces"] = nlohmann::json::array();
  for (const auto& face : f.faces)
    faces.push_back({{"name", face.name},
                     {"u", face.u},
                     {"v", face.v},
                     {"score", face.score}});
  auto& out = j["out"] = nlohmann::json::array();
  for (const auto& p : f.output)
    out.push_back({{"name", p.name},
                   {"x", p.position.x},
                   {"y", p.position.y},
                   {"z", p.position.z},
                   {"track_id", p.track_id},
                   {"source", std::string(to_string(p.source))}});
  j["cmd"] = {{"v", f.command.v}, {"omega", f.command.omega}};
  return j;
}

inline TraceHeader header_from_json(const nlohmann::json& j) {
  TraceHeader h;
  h.schema_version = j.at("schema_version").get<int>();
  if (h.schema_version != kTraceSchemaVersion)
    throw io_error("unsupported trace schema_version " +
                   std::to_string(h.schema_version));
  h.scenario = j.at("scenario").get<std::string>();
  h.method = j.at("method").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.frame_rate = j.at("frame_rate").get<double>();
  h.duration = j.at("duration").get<double>();
  if (!j.at("target").is_null()) h.target = j.at("target").get<std::string>();
  h.thresholds.d_match = j.at("d_match").get<double>();
  h.thresholds.clearmot_threshold = j.at("clearmot_threshold").get<double>();
  return h;
}

inline TraceFrame frame_from_json(const nlohmann::json& j) {
  TraceFrame f;
  f.t = j.at("t").get<double>();
  const auto& robot = j.at("robot");
  f.robot = {robot.at("x").get<double>(), robot.at("y").get<double>(),
             Angle(robot.at("heading").get<double>())};
  for (const auto& g : j.at("gt"))
    f.ground_truth.push_back({g.at("name").get<std::string>(),
                              {g.at("x").get<double>(), g.at("y").get<double>()}});
  for (const auto& d : j.at("tracks")) {
    TrackDetection det;
    det.track_id = d.at("id").get<std::int64_t>();
    det.position = {d.at("x").get<double>(), d.at("y").get<double>(),
                    d.at("z").get<double>()};
    det.timestamp = f.t;
    f.tracks.push_back(det);
  }
  for (const auto& face_json : j.at("faces")) {
    FaceObservation face;
    face.name = face_json.at("name").get<std::string>();
    face.u = face_json.at("u").get<double>();
    face.v = face_json.at("v").get<double>();
    face.score = face_json.at("score").get<double>();
    face.timestamp = f.t;
    f.faces.push_back(std::move(face));
  }
  for (const auto& p : j.at("out")) {
    IdentifiedPerson person;
    person.name = p.at("name").get<std::string>();
    person.position = {p.at("x").get<double>(), p.at("y").get<double>(),
                       p.at("z").get<double>()};
    person.track_id = p.at("track_id").get<std::int64_t>();
    person.source = detail::source_from_string(p.at("source").get<std::string>());
    f.output.push_back(std::move(person));
  }
  f.command = {j.at("cmd").at("v").get<double>(),
               j.at("cmd").at("omega").get<double>()};
  return f;
}

/// Evaluation view of a frame: hypotheses transformed into the world frame
/// with the robot pose recorded at sensing time.
inline FrameRecord to_frame_record(const TraceFrame& frame) {
  FrameRecord record;
  record.t = frame.t;
  record.robot = frame.robot;
  record.ground_truth = frame.ground_truth;
  record.hypotheses.reserve(frame.output.size());
  for (const auto& person : frame.output)
    record.hypotheses.push_back({person.name,
                                 robot_to_world_frame(person.position, frame.robot),
                                 person.track_id});
  return record;
}

inline void write_trace(std::ostream& out, const TraceHeader& header,
                        std::span<const TraceFrame> frames) {
  out << to_json(header).dump() << '\n';
  for (const auto& frame : frames) out << to_json(frame).dump() << '\n';
}

struct ParsedTrace {
  TraceHeader header;
  std::vector<TraceFrame> frames;
};

/// Reads a JSONL trace, reporting the offending line number on any schema
/// problem.
inline ParsedTrace read_trace(std::istream& in, const std::string& origin) {
  ParsedTrace parsed;
  std::string line;
  int lineno = 0;
  double last_t = -1.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw io_error(origin + ":" + std::to_string(lineno) +
                     ": malformed trace line: " + e.what());
    }
    try {
      if (lineno == 1) {
        parsed.header = header_from_json(j);
      } else {
        TraceFrame frame = frame_from_json(j);
        if (frame.t <= last_t)
          throw io_error("timestamps not strictly increasing");
        last_t = frame.t;
        parsed.frames.push_back(std::move(frame));
      }
    } catch (const nlohmann::json::exception& e) {
      throw io_error(origin + ":" + std::to_string(lineno) +
                     ": bad trace schema: " + e.what());
    } catch (const io_error& e) {
      throw io_error(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (lineno == 0) throw io_error(origin + ": empty trace file");
  if (parsed.frames.empty()) throw io_error(origin + ": trace has no frames");
  return parsed;
}

inline ParsedTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open trace file '" + path + "'");
  return read_trace(in, path);
}

// ---------------------------------------------------------------------------
// CSV reports

/// Full-precision value formatting so reports round-trip exactly.
inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline constexpr std::string_view kReportCsvHeader =
    "scenario,method,seed,avg_abs_error,frames_total,frames_correct,"
    "frames_incorrect,frames_undetected,pct_correct,pct_incorrect,"
    "pct_undetected,target_frames,target_correct,target_incorrect,"
    "target_undetected,pct_target_correct,pct_target_incorrect,"
    "pct_target_undetected,motp,mota,false_positives,false_negatives,"
    "mismatches,gt_count";

inline void write_report_row(std::ostream& out, const std::string& scenario,
                             const std::string& method, const std::string& seed,
                             const MetricReport& r) {
  out << scenario << ',' << method << ',' << seed << ','
      << csv_number(r.avg_abs_error) << ',' << r.frames_total << ','
      << r.frames_correct << ',' << r.frames_incorrect << ','
      << r.frames_undetected << ',' << csv_number(r.pct_correct()) << ','
      << csv_number(r.pct_incorrect()) << ',' << csv_number(r.pct_undetected())
      << ',' << r.target_frames << ',' << r.target_correct << ','
      << r.target_incorrect << ',' << r.target_undetected << ','
      << csv_number(r.pct_target_correct()) << ','
      << csv_number(r.pct_target_incorrect()) << ','
      << csv_number(r.pct_target_undetected()) << ',' << csv_number(r.motp)
      << ',' << csv_number(r.mota) << ',' << r.false_positives << ','
      << r.false_negatives << ',' << r.mismatches << ',' << r.gt_count << '\n';
}

inline void write_report_csv(std::ostream& out, const std::string& scenario,
                             const std::string& method, std::uint64_t seed,
                             const MetricReport& r) {
  out << kReportCsvHeader << '\n';
  write_report_row(out, scenario, method, std::to_string(seed), r);
}

}  // namespace idtrack
