#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "idtrack/baselines.hpp"
#include "idtrack/config.hpp"
#include "idtrack/control.hpp"
#include "idtrack/fusion.hpp"
#include "idtrack/metrics.hpp"
#include "idtrack/rng.hpp"
#include "idtrack/scenarios.hpp"
#include "idtrack/sensors.hpp"
#include "idtrack/trace.hpp"
#include "idtrack/world.hpp"

namespace idtrack {

struct RunResult {
  TraceHeader header;
  std::vector<TraceFrame> trace;
  std::vector<FrameRecord> frames;
  MetricReport report;
};

/// Runs the closed loop (world -> sensors -> method -> controller -> world)
/// for the configured scenario and scores the result.
inline RunResult run_simulation(const RunConfig& cfg) {
  const ScenarioScript script = build_scenario(cfg.scenario);
  const int frame_count =
      static_cast<int>(std::lround(script.duration * kFrameRate));

  RunResult result;
  result.header.scenario = script.id;
  result.header.method = std::string(to_string(cfg.method));
  result.header.seed = cfg.seed;
  result.header.duration = script.duration;
  result.header.target = script.target_name;
  result.header.thresholds = cfg.metrics;
  result.trace.reserve(frame_count);
  result.frames.reserve(frame_count);

  Rng rng(cfg.seed);
  SyntheticTrackerState tracker;
  IdentityMemory memory;
  LabeledTrackerState labeled;
  FollowController controller;
  Pose2D robot = script.robot_start;

  for (int k = 0; k < frame_count; ++k) {
    const double t = k * kFrameDt;
    const WorldState world = step_world(script, t, robot);
    const auto tracks = synth_tracker_step(tracker, world, cfg.noise, rng);
    const auto faces = synth_face_step(world, cfg.camera(), cfg.noise, rng);

    std::vector<IdentifiedPerson> output;
    switch (cfg.method) {
      case Method::Snnts: {
        auto fused = snnts_step(tracks, faces, memory, cfg.fusion, t);
        memory = std::move(fused.memory);
        output = std::move(fused.people);
        break;
      }
      case Method::FacenetOnly:
        output = facenet_only_step(faces, world, cfg.camera(), cfg.depth, rng);
        break;
      case Method::LabeledTracker:
        output = labeled.step(tracks, k, world);
        break;
    }

    const ControlCommand cmd =
        controller.step(output, script.robot_mode, script.target_name,
                        cfg.control);

    TraceFrame frame;
    frame.t = t;
    frame.robot = robot;
    frame.ground_truth.reserve(world.persons.size());
    for (const auto& person : world.persons)
      frame.ground_truth.push_back({person.name, person.pose.position()});
    frame.tracks = tracks;
    frame.faces = faces;
    frame.output = std::move(output);
    frame.command = cmd;
    result.frames.push_back(to_frame_record(frame));
    result.trace.push_back(std::move(frame));

    if (script.robot_mode != RobotMode::Stationary)
      robot = integrate_robot(robot, cmd, kFrameDt);
  }

  result.report = build_report(result.frames, cfg.metrics, script.target_name);
  return result;
}

struct SimulateOutput {
  RunResult result;
  std::filesystem::path trace_path;
  std::filesystem::path report_path;
};

inline std::string run_stem(const RunConfig& cfg) {
  return std::string(to_string(cfg.scenario)) + "_" +
         std::string(to_string(cfg.method)) + "_" + std::to_string(cfg.seed);
}

/// simulate subcommand core: run, then write <stem>.trace.jsonl and
/// <stem>.report.csv under out_dir.
inline SimulateOutput run_and_write(const RunConfig& cfg,
                                    const std::filesystem::path& out_dir) {
  SimulateOutput out;
  out.result = run_simulation(cfg);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + out_dir.string() +
                         "': " + ec.message());

  const std::string stem = run_stem(cfg);
  out.trace_path = out_dir / (stem + ".trace.jsonl");
  out.report_path = out_dir / (stem + ".report.csv");

  std::ofstream trace(out.trace_path, std::ios::binary);
  if (!trace) throw io_error("cannot write '" + out.trace_path.string() + "'");
  write_trace(trace, out.result.header, out.result.trace);
  trace.flush();
  if (!trace) throw io_error("failed writing '" + out.trace_path.string() + "'");

  std::ofstream report(out.report_path, std::ios::binary);
  if (!report) throw io_error("cannot write '" + out.report_path.string() + "'");
  write_report_csv(report, out.result.header.scenario, out.result.header.method,
                   cfg.seed, out.result.report);
  report.flush();
  if (!report) throw io_error("failed writing '" + out.report_path.string() + "'");
  return out;
}

/// evaluate subcommand core: rescore a trace offline. Thresholds default to
/// the ones recorded in the trace header.
inline MetricReport evaluate_trace(const ParsedTrace& parsed,
                                   std::optional<MetricThresholds> thresholds =
                                       std::nullopt) {
  std::vector<FrameRecord> frames;
  frames.reserve(parsed.frames.size());
  for (const auto& frame : parsed.frames) frames.push_back(to_frame_record(frame));
  return build_report(frames, thresholds.value_or(parsed.header.thresholds),
                      parsed.header.target);
}

// ---------------------------------------------------------------------------
// Comparison grid

inline constexpr std::array<Scenario, 5> kAllScenarios = {
    Scenario::Exp1, Scenario::Exp2, Scenario::Exp3, Scenario::Exp4,
    Scenario::Exp5};
inline constexpr std::array<Method, 3> kAllMethods = {
    Method::FacenetOnly, Method::LabeledTracker, Method::Snnts};

struct GridResult {
  std::vector<std::uint64_t> seeds;
  // per (scenario, method): one report per seed, in seed order
  std::map<std::pair<Scenario, Method>, std::vector<MetricReport>> runs;

  const std::vector<MetricReport>& of(Scenario s, Method m) const {
    return runs.at({s, m});
  }

  MetricReport seed_mean(Scenario s, Method m) const {
    return aggregate_report(of(s, m));
  }

  /// Cross-scenario aggregate of per-scenario seed means.
  MetricReport overall(Method m) const {
    std::vector<MetricReport> per_scenario;
    per_scenario.reserve(kAllScenarios.size());
    for (const Scenario s : kAllScenarios) per_scenario.push_back(seed_mean(s, m));
    return aggregate_report(per_scenario);
  }
};

/// Runs scenarios x methods x seeds with the given base config (scenario,
/// method, and seed fields are overwritten per run).
inline GridResult run_grid(const RunConfig& base,
                           std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw config_error("seed list must not be empty");
  GridResult grid;
  grid.seeds.assign(seeds.begin(), seeds.end());
  for (const Scenario scenario : kAllScenarios) {
    for (const Method method : kAllMethods) {
      auto& reports = grid.runs[{scenario, method}];
      reports.reserve(seeds.size());
      for (const std::uint64_t seed : seeds) {
        RunConfig cfg = base;
        cfg.scenario = scenario;
        cfg.method = method;
        cfg.seed = seed;
        reports.push_back(run_simulation(cfg).report);
      }
    }
  }
  return grid;
}

namespace detail {

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

/// compare subcommand core: writes the error matrix, the MOTP/MOTA matrix,
/// and the per-scenario frame-classification percentages (with target-only
/// variants where a target exists) as plot-ready CSV.
inline void write_compare_outputs(const GridResult& grid,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw io_error("cannot create output directory '" + out_dir.string() +
                         "': " + ec.message());

  const auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw io_error("cannot write '" + (out_dir / name).string() + "'");
    return out;
  };

  {
    auto out = open("table1.csv");
    out << "scenario,facenet,labeled,snnts\n";
    std::map<Method, std::vector<MetricReport>> per_scenario;
    for (const Scenario s : kAllScenarios) {
      out << to_string(s);
      for (const Method m : kAllMethods) {
        const MetricReport r = grid.seed_mean(s, m);
        per_scenario[m].push_back(r);
        out << ',' << detail::fixed3(r.avg_abs_error);
      }
      out << '\n';
    }
    out << "average";
    for (const Method m : kAllMethods)
      out << ','
          << detail::fixed3(aggregate_report(per_scenario[m]).avg_abs_error);
    out << '\n';
  }

  {
    auto out = open("table2.csv");
    out << "metric,facenet,labeled,snnts\n";
    out << "motp";
    for (const Method m : kAllMethods)
      out << ',' << detail::fixed3(grid.overall(m).motp);
    out << "\nmota";
    for (const Method m : kAllMethods)
      out << ',' << detail::fixed3(grid.overall(m).mota);
    out << '\n';
  }

  {
    auto out = open("fig8.csv");
    out << "scenario,method,variant,pct_correct,pct_incorrect,pct_undetected\n";
    for (const Scenario s : kAllScenarios) {
      for (const Method m : kAllMethods) {
        const MetricReport r = grid.seed_mean(s, m);
        out << to_string(s) << ',' << to_string(m) << ",all,"
            << detail::fixed3(r.pct_correct()) << ','
            << detail::fixed3(r.pct_incorrect()) << ','
            << detail::fixed3(r.pct_undetected()) << '\n';
        if (r.target_frames > 0)
          out << to_string(s) << ',' << to_string(m) << ",target,"
              << detail::fixed3(r.pct_target_correct()) << ','
              << detail::fixed3(r.pct_target_incorrect()) << ','
              << detail::fixed3(r.pct_target_undetected()) << '\n';
      }
    }
  }
}

}  // namespace idtrack
