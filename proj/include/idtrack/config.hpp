#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "idtrack/baselines.hpp"
#include "idtrack/control.hpp"
#include "idtrack/fusion.hpp"
#include "idtrack/metrics.hpp"
#include "idtrack/scenarios.hpp"
#include "idtrack/sensors.hpp"

namespace idtrack {

/// Bad flags, bad config keys/values, unknown scenarios. Exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable/unwritable files or malformed trace contents. Exit code 3.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { Snnts, FacenetOnly, LabeledTracker };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::Snnts: return "snnts";
    case Method::FacenetOnly: return "facenet";
    case Method::LabeledTracker: return "labeled";
  }
  return "snnts";
}

inline Method method_from_string(const std::string& name) {
  if (name == "snnts") return Method::Snnts;
  if (name == "facenet") return Method::FacenetOnly;
  if (name == "labeled") return Method::LabeledTracker;
  throw config_error("unknown method '" + name +
                     "' (expected snnts|facenet|labeled)");
}

/// Everything one simulation run needs, with defaults matching the canonical
/// experiment setup. A config file of flat dotted keys can override any field.
struct RunConfig {
  Scenario scenario = Scenario::Exp1;
  Method method = Method::Snnts;
  std::uint64_t seed = 0;
  SensorNoiseConfig noise;
  FusionConfig fusion;
  ControllerConfig control;
  DepthNoiseConfig depth;
  MetricThresholds metrics;

  const CameraIntrinsics& camera() const { return fusion.camera; }
};

namespace detail {

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not a number: '" + value + "'");
  }
}

inline std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not an integer: '" + value + "'");
  }
}

inline double parse_prob(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v < 0.0 || v > 1.0)
    throw config_error("config key '" + key + "': probability outside [0,1]");
  return v;
}

inline double parse_positive(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (!(v > 0.0)) throw config_error("config key '" + key + "': must be > 0");
  return v;
}

}  // namespace detail

inline void apply_override(RunConfig& cfg, const std::string& key,
                           const std::string& value) {
  using detail::parse_double;
  using detail::parse_int;
  using detail::parse_positive;
  using detail::parse_prob;

  if (key == "scenario") {
    try {
      cfg.scenario = scenario_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  } else if (key == "method") {
    cfg.method = method_from_string(value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "noise.pos_sigma") {
    cfg.noise.pos_sigma = parse_double(key, value);
  } else if (key == "noise.pixel_sigma") {
    cfg.noise.pixel_sigma = parse_double(key, value);
  } else if (key == "noise.detect_prob") {
    cfg.noise.detect_prob = parse_prob(key, value);
  } else if (key == "noise.face_recog_prob") {
    cfg.noise.face_recog_prob = parse_prob(key, value);
  } else if (key == "noise.face_range_max") {
    cfg.noise.face_range_max = parse_positive(key, value);
  } else if (key == "noise.face_facing_max") {
    cfg.noise.face_facing_max = parse_positive(key, value);
  } else if (key == "noise.tracker_range_max") {
    cfg.noise.tracker_range_max = parse_positive(key, value);
  } else if (key == "noise.miss_max") {
    cfg.noise.miss_max = static_cast<int>(parse_int(key, value));
  } else if (key == "noise.swap_distance") {
    cfg.noise.swap_distance = parse_positive(key, value);
  } else if (key == "noise.swap_prob") {
    cfg.noise.swap_prob = parse_prob(key, value);
  } else if (key == "noise.face_misrecog_prob") {
    cfg.noise.face_misrecog_prob = parse_prob(key, value);
  } else if (key == "fusion.theta_thres") {
    cfg.fusion.theta_thres = parse_positive(key, value);
    if (cfg.fusion.theta_thres > kPi)
      throw config_error("config key 'fusion.theta_thres': must be <= pi");
  } else if (key == "fusion.memory_ttl") {
    cfg.fusion.memory_ttl = static_cast<int>(parse_int(key, value));
  } else if (key == "camera.hfov") {
    cfg.fusion.camera = CameraIntrinsics::from_hfov(
        parse_positive(key, value), cfg.fusion.camera.image_width);
  } else if (key == "camera.image_width") {
    cfg.fusion.camera = CameraIntrinsics::from_hfov(
        cfg.fusion.camera.hfov(), parse_positive(key, value));
  } else if (key == "control.k_omega") {
    cfg.control.k_omega = parse_positive(key, value);
  } else if (key == "control.k_v") {
    cfg.control.k_v = parse_positive(key, value);
  } else if (key == "control.follow_distance") {
    cfg.control.follow_distance = parse_positive(key, value);
  } else if (key == "control.lost_target_timeout") {
    cfg.control.lost_target_timeout = static_cast<int>(parse_int(key, value));
  } else if (key == "control.v_max") {
    cfg.control.v_max = parse_positive(key, value);
  } else if (key == "control.omega_max") {
    cfg.control.omega_max = parse_positive(key, value);
  } else if (key == "depth.depth_sigma") {
    cfg.depth.depth_sigma = parse_double(key, value);
  } else if (key == "depth.edge_fusion_prob") {
    cfg.depth.edge_fusion_prob = parse_prob(key, value);
  } else if (key == "depth.edge_fusion_min") {
    cfg.depth.edge_fusion_min = parse_double(key, value);
  } else if (key == "depth.edge_fusion_max") {
    cfg.depth.edge_fusion_max = parse_double(key, value);
  } else if (key == "metrics.d_match") {
    cfg.metrics.d_match = parse_positive(key, value);
  } else if (key == "metrics.clearmot_threshold") {
    cfg.metrics.clearmot_threshold = parse_positive(key, value);
  } else {
    throw config_error("unknown config key '" + key + "'");
  }
}

/// Parses `key = value` lines ('#' starts a comment, blank lines ignored)
/// and applies each override in order.
inline void apply_config_text(RunConfig& cfg, std::istream& in,
                              const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string stripped = strip(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": expected key = value");
    try {
      apply_override(cfg, strip(stripped.substr(0, eq)),
                     strip(stripped.substr(eq + 1)));
    } catch (const config_error& e) {
      throw config_error(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  apply_config_text(cfg, in, path);
}

}  // namespace idtrack
