#include "follower/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace follower::world {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double path_length(const Environment& env) {
  double len = 0;
  for (std::size_t i = 1; i < env.target_path.size(); ++i) {
    double dx = env.target_path[i].x - env.target_path[i - 1].x;
    double dy = env.target_path[i].y - env.target_path[i - 1].y;
    len += std::hypot(dx, dy);
  }
  return len;
}

bool environment_valid(const Environment& env) {
  if (env.bounds.w <= 0 || env.bounds.h <= 0) return false;
  if (env.target_path.empty()) return false;
  for (std::size_t i = 1; i < env.target_path.size(); ++i)
    if (env.target_path[i].t <= env.target_path[i - 1].t) return false;
  for (const Waypoint& wp : env.target_path)
    if (wp.x < env.bounds.x || wp.x > env.bounds.x1() ||
        wp.y < env.bounds.y || wp.y > env.bounds.y1())
      return false;
  for (const Rect& r : env.obstacles) {
    if (r.w <= 0 || r.h <= 0) return false;
    if (r.x < env.bounds.x || r.y < env.bounds.y ||
        r.x1() > env.bounds.x1() || r.y1() > env.bounds.y1())
      return false;
  }
  return true;
}

void target_position(const Environment& env, double t, double* x, double* y) {
  const auto& path = env.target_path;
  if (t <= path.front().t) {
    *x = path.front().x;
    *y = path.front().y;
    return;
  }
  if (t >= path.back().t) {
    *x = path.back().x;
    *y = path.back().y;
    return;
  }
  std::size_t i = 1;
  while (path[i].t < t) ++i;
  double f = (t - path[i - 1].t) / (path[i].t - path[i - 1].t);
  *x = path[i - 1].x + f * (path[i].x - path[i - 1].x);
  *y = path[i - 1].y + f * (path[i].y - path[i - 1].y);
}

double CameraConfig::focal_px() const {
  return (vision::kFrameWidth / 2.0) / std::tan(hfov_deg * kDeg / 2.0);
}

namespace {

// Distance along a ray to an AABB, or +inf when missed. Origin inside the
// box reports 0.
double ray_rect_distance(double ox, double oy, double dx, double dy,
                         const Rect& r) {
  double tmin = 0, tmax = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    double o = axis == 0 ? ox : oy;
    double d = axis == 0 ? dx : dy;
    double lo = axis == 0 ? r.x : r.y;
    double hi = axis == 0 ? r.x1() : r.y1();
    if (std::abs(d) < 1e-15) {
      if (o < lo || o > hi) return std::numeric_limits<double>::infinity();
      continue;
    }
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return std::numeric_limits<double>::infinity();
  }
  return tmin;
}

// Distance along a ray (origin inside bounds) to the bounds walls.
double ray_bounds_exit(double ox, double oy, double dx, double dy,
                       const Rect& b) {
  double tmax = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    double o = axis == 0 ? ox : oy;
    double d = axis == 0 ? dx : dy;
    double lo = axis == 0 ? b.x : b.y;
    double hi = axis == 0 ? b.x1() : b.y1();
    if (std::abs(d) < 1e-15) continue;
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    tmax = std::min(tmax, std::max(t0, t1));
  }
  return std::max(tmax, 0.0);
}

}  // namespace

double ultrasonic_distance(const Pose& pose, double mount_angle_rad,
                           const SensorConfig& cfg, const Environment& env) {
  double best = cfg.max_range_cm / 100.0;
  double half = cfg.cone_half_angle_deg * kDeg;
  int n = std::max(cfg.n_rays, 1);
  for (int i = 0; i < n; ++i) {
    double off = n == 1 ? 0.0
                        : -half + 2.0 * half * static_cast<double>(i) /
                                      static_cast<double>(n - 1);
    double ang = pose.a + mount_angle_rad + off;
    double dx = std::cos(ang), dy = std::sin(ang);
    for (const Rect& r : env.obstacles)
      best = std::min(best, ray_rect_distance(pose.x, pose.y, dx, dy, r));
    best = std::min(best, ray_bounds_exit(pose.x, pose.y, dx, dy, env.bounds));
  }
  return std::min(best * 100.0, cfg.max_range_cm);
}

namespace {

// Does the open segment from (ox,oy) to (tx,ty) pass through the rectangle?
bool segment_hits_rect(double ox, double oy, double tx, double ty,
                       const Rect& r) {
  double dx = tx - ox, dy = ty - oy;
  double tmin = 0, tmax = 1;
  for (int axis = 0; axis < 2; ++axis) {
    double o = axis == 0 ? ox : oy;
    double d = axis == 0 ? dx : dy;
    double lo = axis == 0 ? r.x : r.y;
    double hi = axis == 0 ? r.x1() : r.y1();
    if (std::abs(d) < 1e-15) {
      if (o < lo || o > hi) return false;
      continue;
    }
    double t0 = (lo - o) / d;
    double t1 = (hi - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return false;
  }
  return tmax > 0 && tmin < 1;
}

}  // namespace

vision::Frame render_frame(const Pose& robot, double target_x,
                           double target_y, const CameraConfig& cam,
                           const Environment& env) {
  vision::Frame f;
  f.fill(cam.bg_r, cam.bg_g, cam.bg_b);
  double dx = target_x - robot.x, dy = target_y - robot.y;
  double dist = std::hypot(dx, dy);
  if (dist < 1e-9 || dist > cam.far_clip_m) return f;
  double bearing_ccw = wrap_angle(std::atan2(dy, dx) - robot.a);
  double half_fov = cam.hfov_deg * kDeg / 2.0;
  if (std::abs(bearing_ccw) > half_fov) return f;
  for (const Rect& r : env.obstacles)
    if (segment_hits_rect(robot.x, robot.y, target_x, target_y, r)) return f;

  // rightward-positive image coordinates
  double cx = vision::kFrameWidth / 2.0 + cam.focal_px() * std::tan(-bearing_ccw);
  double cy = vision::kFrameHeight / 2.0;
  double radius = cam.focal_px() * cam.target_radius_m / dist;
  int x0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1)));
  int x1 = std::min(vision::kFrameWidth - 1,
                    static_cast<int>(std::ceil(cx + radius + 1)));
  int y0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1)));
  int y1 = std::min(vision::kFrameHeight - 1,
                    static_cast<int>(std::ceil(cy + radius + 1)));
  double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      double ddx = x - cx, ddy = y - cy;
      if (ddx * ddx + ddy * ddy <= r2)
        f.set_pixel(x, y, cam.target_r, cam.target_g, cam.target_b);
    }
  return f;
}

vision::Frame render_frame(const Pose& robot, double target_x,
                           double target_y, const CameraConfig& cam) {
  Environment open;
  open.bounds = {-1e6, -1e6, 2e6, 2e6};
  return render_frame(robot, target_x, target_y, cam, open);
}

bool collision_check(const Pose& pose, double body_radius,
                     const Environment& env) {
  if (pose.x - body_radius < env.bounds.x ||
      pose.y - body_radius < env.bounds.y ||
      pose.x + body_radius > env.bounds.x1() ||
      pose.y + body_radius > env.bounds.y1())
    return true;
  for (const Rect& r : env.obstacles) {
    double nx = std::clamp(pose.x, r.x, r.x1());
    double ny = std::clamp(pose.y, r.y, r.y1());
    double dx = pose.x - nx, dy = pose.y - ny;
    if (dx * dx + dy * dy <= body_radius * body_radius) return true;
  }
  return false;
}

EncoderDelta encoder_emulate(const WheelSpeeds& speeds, double dt,
                                  const RobotGeometry& geom,
                                  EncoderState& state) {
  state.angle_left += speeds.left * dt;
  state.angle_right += speeds.right * dt;
  // a hair of slack so exact revolution boundaries land on the tick
  double scale = geom.ticks_per_rev / (2.0 * std::numbers::pi);
  auto ticks = [scale](double angle) {
    return static_cast<long long>(
        std::floor(angle * scale + 1e-9));
  };
  EncoderDelta d;
  d.left = ticks(state.angle_left) - state.emitted_left;
  d.right = ticks(state.angle_right) - state.emitted_right;
  state.emitted_left += d.left;
  state.emitted_right += d.right;
  return d;
}

std::vector<Environment> builtin_environments() {
  std::vector<Environment> envs(3);

  envs[0].name = "env1";
  envs[0].bounds = {0, 0, 4, 3};
  envs[0].obstacles = {{1.4, 0.4, 0.5, 0.4},
                       {2.0, 2.2, 0.4, 0.4},
                       {3.0, 0.6, 0.5, 0.5}};
  envs[0].target_path = {{0.0, 1.0, 1.5},
                         {5.0, 1.7, 1.5},
                         {9.0, 2.2, 1.72},
                         {13.0, 2.75, 1.6},
                         {16.5, 3.1, 1.66}};
  envs[0].robot_start = {0.5, 1.5, 0.0};

  envs[1].name = "env2";
  envs[1].bounds = {0, 0, 4, 3};
  envs[1].obstacles = {{1.6, 1.6, 0.4, 0.4}, {2.3, 0.2, 0.5, 0.4}};
  envs[1].target_path = {{0.0, 1.0, 1.0},
                         {5.5, 2.0, 1.0},
                         {10.75, 3.0, 1.32}};
  envs[1].robot_start = {0.5, 1.0, 0.0};

  envs[2].name = "env3";
  envs[2].bounds = {0, 0, 4, 3};
  envs[2].obstacles = {{1.5, 1.0, 0.5, 0.35}, {2.4, 2.45, 0.45, 0.4}};
  envs[2].target_path = {{0.0, 1.0, 2.0},
                         {4.5, 1.85, 1.75},
                         {8.5, 2.7, 1.9},
                         {11.5, 3.3, 2.1}};
  envs[2].robot_start = {0.4, 2.0, 0.0};

  return envs;
}

}  // namespace follower::world
