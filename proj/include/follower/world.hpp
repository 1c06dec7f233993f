#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "follower/kinematics.hpp"
#include "follower/vision.hpp"

namespace follower::world {

// Axis-aligned rectangle, x/y is the min corner, meters.
struct Rect {
  double x = 0, y = 0, w = 0, h = 0;
  double x1() const { return x + w; }
  double y1() const { return y + h; }
  bool operator==(const Rect&) const = default;
};

// Target waypoint: the target sits at (x, y) at time t; linear interpolation
// between waypoints, clamped at both ends.
struct Waypoint {
  double t = 0, x = 0, y = 0;
  bool operator==(const Waypoint&) const = default;
};

struct Environment {
  std::string name;
  Rect bounds{0, 0, 4, 3};
  std::vector<Rect> obstacles;
  std::vector<Waypoint> target_path;
  Pose robot_start;
  bool operator==(const Environment&) const = default;
};

// Course length: sum of waypoint segment lengths, meters.
double path_length(const Environment& env);

// Obstacles and waypoints inside bounds, path non-empty and time-monotone.
bool environment_valid(const Environment& env);

// Target position at time t, clamped to the path ends.
void target_position(const Environment& env, double t, double* x, double* y);

struct SensorConfig {
  double mount_left_deg = 15;    // left sensor, ccw from heading
  double mount_right_deg = -15;  // right sensor
  double cone_half_angle_deg = 15;
  double max_range_cm = 400;
  int n_rays = 9;
};

struct CameraConfig {
  double hfov_deg = 60;
  double target_radius_m = 0.05;
  double far_clip_m = 10.0;
  std::uint8_t target_r = 255, target_g = 255, target_b = 0;
  std::uint8_t bg_r = 40, bg_g = 40, bg_b = 40;
  double focal_px() const;  // half width / tan(hfov/2)
};

// Minimum distance reported by a cone of rays centered on heading +
// mount_angle, cm, capped at max range. Rays hit obstacle rectangles and the
// world bounds.
double ultrasonic_distance(const Pose& pose, double mount_angle_rad,
                           const SensorConfig& cfg, const Environment& env);

// Pinhole render of the target disc on a uniform background. The target
// disappears outside the horizontal FOV, beyond the far clip, or when an
// obstacle blocks the straight line from robot to target center.
vision::Frame render_frame(const Pose& robot, double target_x,
                           double target_y, const CameraConfig& cam,
                           const Environment& env);

// Same, with no occluders (free-space rendering for calibration sweeps).
vision::Frame render_frame(const Pose& robot, double target_x,
                           double target_y, const CameraConfig& cam);

// True when the robot disc touches any obstacle (closed boundary) or pokes
// outside the world bounds.
bool collision_check(const Pose& pose, double body_radius,
                     const Environment& env);

// Wheel angle accumulators for tick quantization.
struct EncoderState {
  double angle_left = 0, angle_right = 0;  // cumulative wheel angle, rad
  long long emitted_left = 0, emitted_right = 0;
};

// Advances the accumulated wheel angles by one control step and returns the
// newly crossed encoder ticks. Fractional progress persists in the state, so
// ticks are conserved across any step partitioning.
EncoderDelta encoder_emulate(const WheelSpeeds& speeds, double dt,
                                  const RobotGeometry& geom,
                                  EncoderState& state);

// The three stock environments.
std::vector<Environment> builtin_environments();

}  // namespace follower::world
