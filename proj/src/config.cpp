#include "follower/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace follower::config {

namespace {

long long as_int(const std::string& key, double value) {
  double r = std::round(value);
  if (std::abs(value - r) > 1e-9)
    throw std::invalid_argument("override " + key + " takes an integer");
  return static_cast<long long>(r);
}

}  // namespace

void apply_override(SimConfig& cfg, const std::string& key, double value) {
  if (key == "geometry.wheel_radius") cfg.geometry.wheel_radius = value;
  else if (key == "geometry.axle_length") cfg.geometry.axle_length = value;
  else if (key == "geometry.ticks_per_rev")
    cfg.geometry.ticks_per_rev = static_cast<int>(as_int(key, value));
  else if (key == "geometry.body_radius") cfg.geometry.body_radius = value;
  else if (key == "sensors.mount_left_deg") cfg.sensors.mount_left_deg = value;
  else if (key == "sensors.mount_right_deg")
    cfg.sensors.mount_right_deg = value;
  else if (key == "sensors.cone_half_angle_deg")
    cfg.sensors.cone_half_angle_deg = value;
  else if (key == "sensors.max_range_cm") cfg.sensors.max_range_cm = value;
  else if (key == "sensors.n_rays")
    cfg.sensors.n_rays = static_cast<int>(as_int(key, value));
  else if (key == "camera.hfov_deg") cfg.camera.hfov_deg = value;
  else if (key == "camera.target_radius_m") cfg.camera.target_radius_m = value;
  else if (key == "camera.far_clip_m") cfg.camera.far_clip_m = value;
  else if (key == "vision.h_lo") cfg.vision.hsv_range.h_lo = value;
  else if (key == "vision.h_hi") cfg.vision.hsv_range.h_hi = value;
  else if (key == "vision.s_lo") cfg.vision.hsv_range.s_lo = value;
  else if (key == "vision.s_hi") cfg.vision.hsv_range.s_hi = value;
  else if (key == "vision.v_lo") cfg.vision.hsv_range.v_lo = value;
  else if (key == "vision.v_hi") cfg.vision.hsv_range.v_hi = value;
  else if (key == "vision.threshold_radius_px")
    cfg.vision.threshold_radius_px = value;
  else if (key == "vision.open_kernel")
    cfg.vision.open_kernel = static_cast<int>(as_int(key, value));
  else if (key == "vision.blur_kernel")
    cfg.vision.blur_kernel = static_cast<int>(as_int(key, value));
  else if (key == "vision.blur_sigma") cfg.vision.blur_sigma = value;
  else if (key == "vision.hough_r_min")
    cfg.vision.hough_r_min = static_cast<int>(as_int(key, value));
  else if (key == "vision.hough_r_max")
    cfg.vision.hough_r_max = static_cast<int>(as_int(key, value));
  else if (key == "vision.hough_min_votes")
    cfg.vision.hough_min_votes = static_cast<int>(as_int(key, value));
  else if (key == "control.kp") cfg.gains.kp = value;
  else if (key == "control.ki") cfg.gains.ki = value;
  else if (key == "control.integral_limit") cfg.integral_limit = value;
  else if (key == "plant.tau") cfg.plant_tau = value;
  else if (key == "timing.plan_period_s") cfg.timing.plan_period_s = value;
  else if (key == "timing.control_dt_s") cfg.timing.control_dt_s = value;
  else if (key == "timing.timeout_s") cfg.timing.timeout_s = value;
  else if (key == "expert.k_img") cfg.expert.k_img = value;
  else if (key == "expert.k_obs") cfg.expert.k_obs = value;
  else if (key == "expert.v_max") cfg.expert.v_max = value;
  else if (key == "training.epochs")
    cfg.training.epochs = static_cast<int>(as_int(key, value));
  else if (key == "training.batch_size")
    cfg.training.batch_size = static_cast<int>(as_int(key, value));
  else if (key == "training.dataset_rows")
    cfg.training.dataset_rows = static_cast<int>(as_int(key, value));
  else
    throw std::invalid_argument("unknown config key: " + key);
}

void apply_config_file(SimConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_object())
    throw std::runtime_error("config file must hold a JSON object: " + path);
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number())
      throw std::runtime_error("config value for " + key +
                               " must be a number");
    apply_override(cfg, key, value.get<double>());
  }
}

}  // namespace follower::config
