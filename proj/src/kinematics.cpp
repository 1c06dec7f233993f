#include "follower/kinematics.hpp"

#include <cmath>
#include <numbers>

namespace follower {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Below this yaw rate the arc formulas lose precision; use the straight line.
constexpr double kStraightEps = 1e-9;
}  // namespace

double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);  // lands in [-pi, pi]
  if (a <= -kPi) a += kTwoPi;
  return a;
}

WheelSpeeds body_to_wheel_speeds(const BodyTwist& t, const RobotGeometry& g) {
  WheelSpeeds s;
  s.left = (2.0 * t.v - t.w * g.axle_length) / (2.0 * g.wheel_radius);
  s.right = (2.0 * t.v + t.w * g.axle_length) / (2.0 * g.wheel_radius);
  return s;
}

BodyTwist wheel_to_body_speeds(const WheelSpeeds& s, const RobotGeometry& g) {
  BodyTwist t;
  t.v = g.wheel_radius * (s.right + s.left) / 2.0;
  t.w = g.wheel_radius * (s.right - s.left) / g.axle_length;
  return t;
}

Pose integrate_unicycle(const Pose& p, const BodyTwist& t, double dt) {
  Pose out;
  if (std::abs(t.w) < kStraightEps) {
    out.x = p.x + t.v * dt * std::cos(p.a);
    out.y = p.y + t.v * dt * std::sin(p.a);
    out.a = wrap_angle(p.a + t.w * dt);
    return out;
  }
  // Rotate about the ICC at signed radius v/w.
  double r = t.v / t.w;
  double a1 = p.a + t.w * dt;
  out.x = p.x + r * (std::sin(a1) - std::sin(p.a));
  out.y = p.y - r * (std::cos(a1) - std::cos(p.a));
  out.a = wrap_angle(a1);
  return out;
}

Pose odometry_update(const Pose& p, const EncoderDelta& d,
                     const RobotGeometry& g) {
  double per_tick = kTwoPi * g.wheel_radius / g.ticks_per_rev;
  double dl = per_tick * static_cast<double>(d.left);
  double dr = per_tick * static_cast<double>(d.right);
  double dc = (dl + dr) / 2.0;
  Pose out;
  out.x = p.x + dc * std::cos(p.a);
  out.y = p.y + dc * std::sin(p.a);
  out.a = wrap_angle(p.a + (dr - dl) / g.axle_length);
  return out;
}

}  // namespace follower
