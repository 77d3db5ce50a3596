#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "idtrack/geometry.hpp"

namespace idtrack {

inline constexpr double kFrameRate = 10.0;  // sensor/update rate [Hz]
inline constexpr double kFrameDt = 1.0 / kFrameRate;
inline constexpr double kHeadHeight = 1.7;     // face centre above ground [m]
inline constexpr double kTrackerHeight = 1.0;  // tracker output z [m]

/// Scripted pedestrian: pose keyframes interpolated linearly in position and
/// along the shortest arc in heading. Times must be strictly increasing.
struct PersonAgent {
  struct Keyframe {
    double t = 0.0;
    Pose2D pose;
  };

  std::string name;
  std::vector<Keyframe> waypoints;
  double body_radius = 0.25;

  Pose2D pose_at(double t) const {
    if (waypoints.empty())
      throw std::invalid_argument("agent '" + name + "' has no waypoints");
    if (t <= waypoints.front().t) return waypoints.front().pose;
    if (t >= waypoints.back().t) return waypoints.back().pose;
    std::size_t hi = 1;
    while (waypoints[hi].t < t) ++hi;
    const auto& a = waypoints[hi - 1];
    const auto& b = waypoints[hi];
    const double s = (t - a.t) / (b.t - a.t);
    Pose2D out;
    out.x = a.pose.x + s * (b.pose.x - a.pose.x);
    out.y = a.pose.y + s * (b.pose.y - a.pose.y);
    const double dh = (b.pose.heading - a.pose.heading).radians();
    out.heading = a.pose.heading + s * dh;
    return out;
  }
};

struct PersonState {
  std::string name;
  Pose2D pose;
  Vec2 velocity;
  double body_radius = 0.25;
};

struct WorldState {
  double t = 0.0;
  Pose2D robot;
  std::vector<PersonState> persons;
};

enum class RobotMode { Stationary, YawTrack, FollowClosest, FollowTarget };

inline std::string_view to_string(RobotMode m) {
  switch (m) {
    case RobotMode::Stationary: return "stationary";
    case RobotMode::YawTrack: return "yaw_track";
    case RobotMode::FollowClosest: return "follow_closest";
    case RobotMode::FollowTarget: return "follow_target";
  }
  return "stationary";
}

struct ScenarioScript {
  std::string id;
  double duration = 120.0;
  std::vector<PersonAgent> persons;
  Pose2D robot_start;
  RobotMode robot_mode = RobotMode::Stationary;
  std::optional<std::string> target_name;

  void validate() const {
    const bool needs_target = robot_mode == RobotMode::YawTrack ||
                              robot_mode == RobotMode::FollowTarget;
    if (needs_target != target_name.has_value())
      throw std::invalid_argument("scenario '" + id +
                                  "': target_name must be set exactly when the "
                                  "robot mode tracks a named person");
    for (const auto& agent : persons)
      for (std::size_t k = 1; k < agent.waypoints.size(); ++k)
        if (!(agent.waypoints[k].t > agent.waypoints[k - 1].t))
          throw std::invalid_argument("agent '" + agent.name +
                                      "': keyframe times must increase");
  }
};

/// World snapshot at time t. The robot pose is the script's start pose unless
/// the caller passes the pose produced by control integration.
inline WorldState step_world(const ScenarioScript& script, double t,
                             std::optional<Pose2D> robot_pose = std::nullopt) {
  if (t < 0.0 || t > script.duration)
    throw std::out_of_range("step_world: t outside [0, duration]");
  WorldState world;
  world.t = t;
  world.robot = robot_pose.value_or(script.robot_start);
  world.persons.reserve(script.persons.size());
  const double h = kFrameDt / 2.0;
  for (const auto& agent : script.persons) {
    PersonState ps;
    ps.name = agent.name;
    ps.pose = agent.pose_at(t);
    ps.body_radius = agent.body_radius;
    // central difference, clamped at the script boundaries
    const double t0 = std::max(0.0, t - h);
    const double t1 = std::min(script.duration, t + h);
    const Pose2D p0 = agent.pose_at(t0);
    const Pose2D p1 = agent.pose_at(t1);
    if (t1 > t0)
      ps.velocity = {(p1.x - p0.x) / (t1 - t0), (p1.y - p0.y) / (t1 - t0)};
    world.persons.push_back(std::move(ps));
  }
  return world;
}

/// True when some other person sits strictly closer to the robot within the
/// blocker's angular radius asin(r/d) of this person's bearing.
inline bool occluded(const WorldState& world, std::size_t person_index) {
  const auto& subject = world.persons[person_index];
  const Vec2 robot = world.robot.position();
  const Vec2 to_subject = subject.pose.position() - robot;
  const double subject_range = to_subject.norm();
  const Angle subject_bearing(std::atan2(to_subject.y, to_subject.x));
  for (std::size_t j = 0; j < world.persons.size(); ++j) {
    if (j == person_index) continue;
    const auto& blocker = world.persons[j];
    const Vec2 to_blocker = blocker.pose.position() - robot;
    const double blocker_range = to_blocker.norm();
    if (!(blocker_range < subject_range) || blocker_range <= 0.0) continue;
    const Angle blocker_bearing(std::atan2(to_blocker.y, to_blocker.x));
    const double half_width =
        std::asin(std::min(1.0, blocker.body_radius / blocker_range));
    if (angular_distance(subject_bearing, blocker_bearing) < half_width)
      return true;
  }
  return false;
}

}  // namespace idtrack
