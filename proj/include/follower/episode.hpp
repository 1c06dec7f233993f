#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "follower/config.hpp"

namespace follower::episode {

// One control substep of simulated state. Sensor and planner columns repeat
// the values of the governing planner tick; target_* is the instantaneous
// ground truth.
struct TraceRow {
  double t = 0;
  int tick = 0;
  double true_x = 0, true_y = 0, true_a = 0;
  double odom_x = 0, odom_y = 0, odom_a = 0;
  double v_desired = 0, v_commanded = 0, v_actual = 0;
  double w_desired = 0, w_commanded = 0, w_actual = 0;
  double left_cm = 0, right_cm = 0;
  double x_angle = 0;
  int proximity = 0;
  int detected = 0;
  double target_x = 0, target_y = 0;
};

enum class Outcome { Completed, Collision, Timeout };

struct EpisodeSummary {
  Outcome outcome = Outcome::Timeout;
  double duration_s = 0;
  double robot_path_m = 0;  // arc length actually driven
  double final_gap_m = 0;   // robot-to-target distance when the run ended
  int planner_ticks = 0;
};

// Planning policy for one tick: resolved input in, desired body twist out.
using PlanFn = std::function<BodyTwist(const planner::PlannerInput&)>;

// Called once per planner tick with the annotated camera frame.
using FrameSink = std::function<void(
    int tick, const vision::Frame& annotated,
    const std::optional<vision::Detection>& det)>;

// The scripted demonstrator: expert_policy with the rest override on Close.
PlanFn expert_plan(const config::SimConfig& cfg);

// The learned policy.
PlanFn model_plan(const planner::ModelBundle& model);

// Simulates one run: every plan_period the camera frame is rendered,
// detected, and planned on; in between the PI loops, plant, kinematics,
// encoders, and collision checks advance every control_dt. The run ends
// Completed once the target path is exhausted and the detection has been
// Close for three straight ticks, Collision on contact, Timeout otherwise.
EpisodeSummary run_episode(const world::Environment& env,
                           const config::SimConfig& cfg, const PlanFn& plan,
                           std::vector<TraceRow>* trace = nullptr,
                           std::vector<planner::DemoRow>* demos = nullptr,
                           const FrameSink& frames = {});

// Expert demonstrations across jittered copies of the stock environments,
// exactly n_rows of them, deterministic in (n_rows, seed, cfg). Throws when
// the tick budget of 6*n_rows burns out early (misconfigured expert).
planner::DemoDataset generate_dataset(int n_rows, std::uint64_t seed,
                                      const config::SimConfig& cfg);

}  // namespace follower::episode
