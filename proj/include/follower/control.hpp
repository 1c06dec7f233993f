#pragma once
#include <optional>
#include <vector>

#include "follower/kinematics.hpp"

namespace follower::control {

// PI gains. kd exists for config compatibility but must stay 0; the update
// law is pure PI.
struct PidGains {
  double kp = 1.50;  // defaults picked by tools/gain_sweep on the tau=0.15 plant
  double ki = 0.25;
  double kd = 0.0;
};

// Per-loop integrator state. Not shareable across loops or threads.
struct PiState {
  double integral = 0.0;
  double dt = 0.01;            // s, rectangular integration step
  double integral_limit = 5.0; // |integral| clamp, anti-windup
};

// Advances the integrator and returns the control effort for this error.
double pi_update(PiState& st, const PidGains& gains, double error);

// One controller tick for both body loops: u = PI(desired - actual),
// command = actual + u (per loop).
BodyTwist controlled_twist(const BodyTwist& actual, const BodyTwist& desired,
                           PiState& v_state, PiState& w_state,
                           const PidGains& v_gains, const PidGains& w_gains);

// First-order velocity plant: state decays toward the command with time
// constant tau, discretized exactly.
struct PlantModel {
  double tau = 0.15;
  double state = 0.0;
};

double plant_step(PlantModel& plant, double command, double dt);

struct StepMetrics {
  std::optional<double> rise_time_s;     // 10% -> 90% crossing interval
  std::optional<double> settling_time_s; // first time permanently inside +/-2%
  double overshoot_pct = 0.0;
};

struct StepTracePoint {
  double t = 0;
  double setpoint = 0;
  double output = 0;
  double u = 0;
};

// Simulates a closed-loop step from rest and measures the response.
// dt must be <= 0.005 s so the crossing times are resolved.
StepMetrics step_response_metrics(const PidGains& gains, double plant_tau,
                                  double dt, double duration,
                                  double setpoint = 1.0,
                                  std::vector<StepTracePoint>* trace = nullptr);

}  // namespace follower::control
