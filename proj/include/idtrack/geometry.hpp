#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace idtrack {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Planar angle stored normalised to (-pi, pi]. All arithmetic re-normalises.
class Angle {
public:
  Angle() = default;
  explicit Angle(double radians) : value_(normalize(radians)) {}

  static Angle from_degrees(double deg) { return Angle(deg_to_rad(deg)); }

  double radians() const { return value_; }
  double degrees() const { return rad_to_deg(value_); }

  Angle operator+(Angle other) const { return Angle(value_ + other.value_); }
  Angle operator-(Angle other) const { return Angle(value_ - other.value_); }
  Angle operator+(double radians) const { return Angle(value_ + radians); }
  Angle operator-(double radians) const { return Angle(value_ - radians); }

  bool operator==(const Angle&) const = default;

  // Maps any finite value into (-pi, pi].
  static double normalize(double radians) {
    double r = std::remainder(radians, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
  }

private:
  double value_ = 0.0;
};

/// Unsigned wrapped separation of two headings: min(|a-b|, 2pi-|a-b|), in [0, pi].
inline double angular_distance(Angle a, Angle b) {
  double d = std::abs(a.radians() - b.radians());
  return std::min(d, kTwoPi - d);
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// World-frame planar pose.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  Angle heading;

  Vec2 position() const { return {x, y}; }
};

/// Point expressed in the robot body frame: x forward, y left, z up.
struct RobotFramePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double planar_range() const { return std::hypot(x, y); }
};

inline RobotFramePoint world_to_robot_frame(const Vec2& p, const Pose2D& robot,
                                            double z = 0.0) {
  const double dx = p.x - robot.x;
  const double dy = p.y - robot.y;
  const double c = std::cos(robot.heading.radians());
  const double s = std::sin(robot.heading.radians());
  return {c * dx + s * dy, -s * dx + c * dy, z};
}

inline Vec2 robot_to_world_frame(const RobotFramePoint& p, const Pose2D& robot) {
  const double c = std::cos(robot.heading.radians());
  const double s = std::sin(robot.heading.radians());
  return {robot.x + c * p.x - s * p.y, robot.y + s * p.x + c * p.y};
}

/// Pinhole model reduced to the horizontal axis; only bearings matter here.
struct CameraIntrinsics {
  double f_x = 0.0;          // horizontal focal length [px]
  double c_x = 0.0;          // principal point column [px]
  double image_width = 0.0;  // [px]

  CameraIntrinsics(double f_x_, double c_x_, double image_width_)
      : f_x(f_x_), c_x(c_x_), image_width(image_width_) {
    if (!(f_x > 0.0)) throw std::invalid_argument("camera: f_x must be > 0");
    if (!(c_x > 0.0 && c_x < image_width))
      throw std::invalid_argument("camera: c_x must lie inside the image");
  }

  static CameraIntrinsics from_hfov(double hfov_radians, double image_width) {
    const double f = (image_width / 2.0) / std::tan(hfov_radians / 2.0);
    return CameraIntrinsics(f, image_width / 2.0, image_width);
  }

  double hfov() const { return 2.0 * std::atan((image_width / 2.0) / f_x); }
};

/// Horizontal pixel column of a robot-frame point. Requires p.x > 0.
/// Positive y (left) lands left of c_x, keeping pixel bearings and
/// track bearings on the same sign convention.
inline double project_to_pixel(const RobotFramePoint& p, const CameraIntrinsics& cam) {
  if (!(p.x > 0.0))
    throw std::invalid_argument("project_to_pixel: point behind camera (x <= 0)");
  return cam.c_x - cam.f_x * (p.y / p.x);
}

}  // namespace idtrack
