#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "follower/control.hpp"
#include "follower/rng.hpp"

using namespace follower;
using namespace follower::control;

TEST_CASE("pi_update proportional and integral parts") {
  PiState st;
  PidGains g{2.0, 0.0, 0.0};
  CHECK(pi_update(st, g, 0.5) == doctest::Approx(1.0));

  PiState st2;
  PidGains gi{0.0, 10.0, 0.0};
  // first call: integral = 1 * 0.01
  CHECK(pi_update(st2, gi, 1.0) == doctest::Approx(0.1));
  CHECK(st2.integral == doctest::Approx(0.01));
}

TEST_CASE("integral clamps at the windup limit") {
  PiState st;
  PidGains g{0.0, 1.0, 0.0};
  for (int i = 0; i < 2000; ++i) pi_update(st, g, 10.0);
  CHECK(st.integral == doctest::Approx(5.0));
  PiState st2;
  for (int i = 0; i < 2000; ++i) pi_update(st2, g, -10.0);
  CHECK(st2.integral == doctest::Approx(-5.0));
}

TEST_CASE("pi_update is linear in the error while unclamped") {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    PidGains g{rng.uniform(0.1, 8.0), rng.uniform(0.0, 30.0), 0.0};
    double e = rng.uniform(-0.5, 0.5);
    PiState a, b;
    double u1 = pi_update(a, g, e);
    double u2 = pi_update(b, g, 2 * e);
    CHECK(u2 == doctest::Approx(2 * u1).epsilon(1e-12));
  }
}

TEST_CASE("controlled_twist adds the correction onto the actual twist") {
  PiState vs, ws;
  PidGains g{1.0, 0.0, 0.0};
  BodyTwist cmd = controlled_twist({0.2, 0.0}, {0.5, 0.0}, vs, ws, g, g);
  // kp=1: u = 0.3, command = 0.2 + 0.3 = desired exactly
  CHECK(cmd.v == doctest::Approx(0.5));
  CHECK(cmd.w == doctest::Approx(0.0));
}

TEST_CASE("plant_step exact first-order discretization") {
  PlantModel p{0.15, 0.0};
  double y = plant_step(p, 1.0, 0.15);
  CHECK(y == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));

  // equilibrium is a fixed point
  PlantModel q{0.15, 1.0};
  for (int i = 0; i < 100; ++i) plant_step(q, 1.0, 0.01);
  CHECK(q.state == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("plant converges monotonically from below") {
  PlantModel p{0.15, 0.0};
  double prev = 0.0;
  for (int i = 0; i < 500; ++i) {
    double y = plant_step(p, 1.0, 0.01);
    CHECK(y >= prev);
    CHECK(y <= 1.0);
    prev = y;
  }
  CHECK(prev > 0.99);
}

TEST_CASE("pure-P closed loop matches the first-order closed form") {
  // With command = actual + u the P loop gives e' = (1 - a*kp) e per step,
  // i.e. a first-order response with tau_eff = -dt / ln(1 - a*kp).
  double dt = 0.0005, tau = 0.15, kp = 1.2973;
  double alpha = 1.0 - std::exp(-dt / tau);
  double tau_eff = -dt / std::log(1.0 - alpha * kp);
  StepMetrics m = step_response_metrics({kp, 0.0, 0.0}, tau, dt, 3.0);
  REQUIRE(m.rise_time_s.has_value());
  REQUIRE(m.settling_time_s.has_value());
  CHECK(*m.rise_time_s ==
        doctest::Approx(tau_eff * std::log(9.0)).epsilon(0.02));
  CHECK(*m.settling_time_s ==
        doctest::Approx(tau_eff * std::log(50.0)).epsilon(0.02));
  CHECK(m.overshoot_pct < 1e-9);
}

TEST_CASE("shipped default gains hit the published step response") {
  StepMetrics m = step_response_metrics(PidGains{}, 0.15, 0.001, 4.0);
  REQUIRE(m.rise_time_s.has_value());
  REQUIRE(m.settling_time_s.has_value());
  CHECK(*m.rise_time_s == doctest::Approx(0.209).epsilon(0.01));
  CHECK(*m.settling_time_s == doctest::Approx(0.338).epsilon(0.01));
  CHECK(m.overshoot_pct > 0.0);  // the integral path is alive
  CHECK(m.overshoot_pct < 2.0);
}

TEST_CASE("steady-state error vanishes with ki > 0") {
  std::vector<StepTracePoint> trace;
  step_response_metrics({2.0, 5.0, 0.0}, 0.15, 0.001, 3.0, 1.0, &trace);
  double final = trace.back().output;
  CHECK(std::abs(final - 1.0) < 1e-3);  // < 0.1% after 20 tau
}

TEST_CASE("closed loop stays bounded over the documented gain region") {
  for (double kp : {0.5, 2.0, 5.0, 8.0, 10.0}) {
    for (double ki : {0.0, 5.0, 20.0, 50.0}) {
      std::vector<StepTracePoint> trace;
      step_response_metrics({kp, ki, 0.0}, 0.15, 0.001, 4.0, 1.0, &trace);
      for (const auto& pt : trace) {
        CHECK(std::isfinite(pt.output));
        CHECK(std::abs(pt.output) < 3.0);
      }
    }
  }
}

TEST_CASE("step_response_metrics rejects coarse dt") {
  CHECK_THROWS_AS(step_response_metrics({1, 1, 0}, 0.15, 0.01, 1.0),
                  std::invalid_argument);
}
