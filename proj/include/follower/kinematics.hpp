#pragma once
#include <cstdint>

namespace follower {

struct RobotGeometry {
  double wheel_radius = 0.05;  // m
  double axle_length = 0.20;   // m, wheel separation
  int ticks_per_rev = 512;     // encoder ticks per wheel revolution
  double body_radius = 0.15;   // m, collision footprint

  bool valid() const {
    return wheel_radius > 0 && axle_length > 0 && ticks_per_rev >= 1 &&
           body_radius > 0;
  }
};

// Body-frame velocities: v forward (m/s), w yaw rate (rad/s, CCW positive).
struct BodyTwist {
  double v = 0;
  double w = 0;
};

// Wheel angular velocities in rad/s.
struct WheelSpeeds {
  double left = 0;
  double right = 0;
};

// World-frame pose; a normalized to (-pi, pi].
struct Pose {
  double x = 0;
  double y = 0;
  double a = 0;
  bool operator==(const Pose&) const = default;
};

struct EncoderDelta {
  long long left = 0;
  long long right = 0;
};

// Normalize an angle to (-pi, pi].
double wrap_angle(double a);

WheelSpeeds body_to_wheel_speeds(const BodyTwist& t, const RobotGeometry& g);
BodyTwist wheel_to_body_speeds(const WheelSpeeds& s, const RobotGeometry& g);

// Exact arc integration about the instantaneous center of curvature; falls
// back to the straight-line formula when |w| < 1e-9 rad/s.
Pose integrate_unicycle(const Pose& p, const BodyTwist& t, double dt);

// Dead-reckoning update from one encoder delta pair. Heading rotation uses
// the old heading for the displacement, then updates the angle.
Pose odometry_update(const Pose& p, const EncoderDelta& d,
                     const RobotGeometry& g);

}  // namespace follower
