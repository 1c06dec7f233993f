#include "follower/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace follower::control {

double pi_update(PiState& st, const PidGains& gains, double error) {
  st.integral += error * st.dt;
  st.integral = std::clamp(st.integral, -st.integral_limit, st.integral_limit);
  return gains.kp * error + gains.ki * st.integral;
}

BodyTwist controlled_twist(const BodyTwist& actual, const BodyTwist& desired,
                           PiState& v_state, PiState& w_state,
                           const PidGains& v_gains, const PidGains& w_gains) {
  BodyTwist cmd;
  cmd.v = actual.v + pi_update(v_state, v_gains, desired.v - actual.v);
  cmd.w = actual.w + pi_update(w_state, w_gains, desired.w - actual.w);
  return cmd;
}

double plant_step(PlantModel& plant, double command, double dt) {
  plant.state += (command - plant.state) * (1.0 - std::exp(-dt / plant.tau));
  return plant.state;
}

StepMetrics step_response_metrics(const PidGains& gains, double plant_tau,
                                  double dt, double duration, double setpoint,
                                  std::vector<StepTracePoint>* trace) {
  if (dt > 0.005)
    throw std::invalid_argument("step_response_metrics: dt must be <= 0.005 s");
  if (duration <= 0 || setpoint == 0.0)
    throw std::invalid_argument("step_response_metrics: bad duration/setpoint");

  PiState st;
  st.dt = dt;
  PlantModel plant{plant_tau, 0.0};

  int n = static_cast<int>(std::ceil(duration / dt));
  std::vector<double> y(n + 1, 0.0);
  if (trace) trace->push_back({0.0, setpoint, 0.0, 0.0});
  for (int k = 0; k < n; ++k) {
    double e = setpoint - plant.state;
    double u = pi_update(st, gains, e);
    double cmd = plant.state + u;
    y[k + 1] = plant_step(plant, cmd, dt);
    if (trace) trace->push_back({(k + 1) * dt, setpoint, y[k + 1], u});
  }

  StepMetrics m;
  double peak = 0.0;
  for (double v : y) peak = std::max(peak, v / setpoint);
  m.overshoot_pct = std::max(0.0, (peak - 1.0) * 100.0);

  int i10 = -1, i90 = -1;
  for (int k = 0; k <= n; ++k) {
    double frac = y[k] / setpoint;
    if (i10 < 0 && frac >= 0.1) i10 = k;
    if (i90 < 0 && frac >= 0.9) i90 = k;
  }
  if (i10 >= 0 && i90 >= 0) m.rise_time_s = (i90 - i10) * dt;

  // Last sample outside the 2% band; settled one step after it.
  int last_out = -1;
  for (int k = 0; k <= n; ++k) {
    if (std::abs(y[k] - setpoint) > 0.02 * std::abs(setpoint)) last_out = k;
  }
  if (last_out < n) m.settling_time_s = (last_out + 1) * dt;

  return m;
}

}  // namespace follower::control
