#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "idtrack/fusion.hpp"
#include "idtrack/geometry.hpp"
#include "idtrack/world.hpp"

namespace idtrack {

struct ControllerConfig {
  double k_omega = 1.5;          // yaw gain [1/s]
  double k_v = 0.8;              // range gain [1/s]
  double follow_distance = 1.0;  // standoff from the target [m]
  int lost_target_timeout = 30;  // frames to decay the command after losing the target
  double v_max = 1.0;            // [m/s]
  double omega_max = 1.5;        // [rad/s]
};

/// Unicycle command, clamped to the configured limits.
struct ControlCommand {
  double v = 0.0;
  double omega = 0.0;
};

inline ControlCommand clamp_command(double v, double omega,
                                    const ControllerConfig& cfg) {
  return {std::clamp(v, -cfg.v_max, cfg.v_max),
          std::clamp(omega, -cfg.omega_max, cfg.omega_max)};
}

/// Picks who to steer at: the nearest entry in FollowClosest mode, or the
/// nearest entry carrying the target's name otherwise. Ties break on smaller
/// range, then smaller track id.
inline std::optional<IdentifiedPerson> select_target(
    std::span<const IdentifiedPerson> identified, RobotMode mode,
    const std::optional<std::string>& target_name) {
  if (mode == RobotMode::Stationary) return std::nullopt;
  std::optional<IdentifiedPerson> best;
  for (const auto& person : identified) {
    if (mode != RobotMode::FollowClosest &&
        (!target_name || person.name != *target_name))
      continue;
    if (!best) {
      best = person;
      continue;
    }
    const double r = person.position.planar_range();
    const double br = best->position.planar_range();
    if (r < br || (r == br && person.track_id < best->track_id)) best = person;
  }
  return best;
}

/// Proportional law: yaw toward the target's bearing; in the following modes
/// also close the range gap to follow_distance, never reversing.
inline ControlCommand proportional_command(const IdentifiedPerson& target,
                                           RobotMode mode,
                                           const ControllerConfig& cfg) {
  const double bearing = std::atan2(target.position.y, target.position.x);
  const double omega = cfg.k_omega * bearing;
  double v = 0.0;
  if (mode == RobotMode::FollowClosest || mode == RobotMode::FollowTarget) {
    v = std::max(0.0, cfg.k_v * (target.position.planar_range() - cfg.follow_distance));
  }
  return clamp_command(v, omega, cfg);
}

/// Discrete unicycle update: turn first, then advance along the new heading.
inline Pose2D integrate_robot(const Pose2D& pose, const ControlCommand& cmd,
                              double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_robot: dt must be > 0");
  Pose2D next;
  next.heading = pose.heading + cmd.omega * dt;
  next.x = pose.x + cmd.v * dt * std::cos(next.heading.radians());
  next.y = pose.y + cmd.v * dt * std::sin(next.heading.radians());
  return next;
}

/// Stateful wrapper owning the lost-target behaviour: while the target is
/// missing the last command decays linearly to zero over lost_target_timeout
/// frames, then the robot stops.
class FollowController {
public:
  ControlCommand step(std::span<const IdentifiedPerson> identified, RobotMode mode,
                      const std::optional<std::string>& target_name,
                      const ControllerConfig& cfg) {
    if (mode == RobotMode::Stationary) return {};
    const auto target = select_target(identified, mode, target_name);
    if (target) {
      last_command_ = proportional_command(*target, mode, cfg);
      frames_without_target_ = 0;
      return last_command_;
    }
    ++frames_without_target_;
    if (frames_without_target_ >= cfg.lost_target_timeout) return {};
    const double scale =
        1.0 - static_cast<double>(frames_without_target_) / cfg.lost_target_timeout;
    return {last_command_.v * scale, last_command_.omega * scale};
  }

private:
  ControlCommand last_command_;
  int frames_without_target_ = 0;
};

}  // namespace idtrack
