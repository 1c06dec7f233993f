#pragma once
#include <string>

#include "follower/control.hpp"
#include "follower/kinematics.hpp"
#include "follower/planner.hpp"
#include "follower/vision.hpp"
#include "follower/world.hpp"

namespace follower::config {

struct Timing {
  double plan_period_s = 0.5;  // planner tick
  double control_dt_s = 0.01;  // PI and physics step
  double timeout_s = 60.0;
};

struct TrainingConfig {
  int epochs = 300;
  int batch_size = 32;
  int dataset_rows = 5000;
};

// Everything tunable in one place. Wheel speed loops share one set of PI
// gains; the plant time constant models the motor response.
struct SimConfig {
  RobotGeometry geometry;
  world::SensorConfig sensors;
  world::CameraConfig camera;
  vision::VisionConfig vision;
  control::PidGains gains;
  double plant_tau = 0.15;
  double integral_limit = 5.0;
  Timing timing;
  planner::ExpertConfig expert;
  TrainingConfig training;
};

// Applies one "section.field" override, e.g. ("control.kp", 4.2). Integer
// fields round the value. Unknown keys throw std::invalid_argument.
void apply_override(SimConfig& cfg, const std::string& key, double value);

// Flat JSON object of overrides: {"control.kp": 4.2, "vision.blur_sigma": 1.5}
void apply_config_file(SimConfig& cfg, const std::string& path);

}  // namespace follower::config
