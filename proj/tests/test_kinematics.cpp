#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "follower/kinematics.hpp"
#include "follower/rng.hpp"

using namespace follower;

namespace {
constexpr double kPi = std::numbers::pi;
const RobotGeometry kGeom{};  // R=0.05, L=0.20, N=512
}

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(kPi + 0.1) == doctest::Approx(-kPi + 0.1).epsilon(1e-12));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.25) == doctest::Approx(0.25));
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    double a = wrap_angle(rng.uniform(-50.0, 50.0));
    CHECK(a > -kPi);
    CHECK(a <= kPi);
  }
}

TEST_CASE("body to wheel speeds") {
  WheelSpeeds s = body_to_wheel_speeds({0.5, 0.0}, kGeom);
  CHECK(s.left == doctest::Approx(10.0));
  CHECK(s.right == doctest::Approx(10.0));

  s = body_to_wheel_speeds({0.5, 1.0}, kGeom);
  CHECK(s.left == doctest::Approx(8.0));
  CHECK(s.right == doctest::Approx(12.0));

  // spin in place: wheels opposite and equal, (w*L)/(2*R) each
  s = body_to_wheel_speeds({0.0, 2.0}, kGeom);
  CHECK(s.left == doctest::Approx(-4.0));
  CHECK(s.right == doctest::Approx(4.0));
}

TEST_CASE("wheel to body speeds") {
  BodyTwist t = wheel_to_body_speeds({10.0, 10.0}, kGeom);
  CHECK(t.v == doctest::Approx(0.5));
  CHECK(t.w == doctest::Approx(0.0));

  t = wheel_to_body_speeds({8.0, 12.0}, kGeom);
  CHECK(t.v == doctest::Approx(0.5));
  CHECK(t.w == doctest::Approx(1.0));
}

TEST_CASE("twist round trip is identity to 1e-12") {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    BodyTwist t{rng.uniform(-1.0, 1.0), rng.uniform(-4.0, 4.0)};
    BodyTwist back = wheel_to_body_speeds(body_to_wheel_speeds(t, kGeom), kGeom);
    CHECK(std::abs(back.v - t.v) < 1e-12);
    CHECK(std::abs(back.w - t.w) < 1e-12);
  }
}

TEST_CASE("integrate_unicycle straight line") {
  Pose p = integrate_unicycle({1.0, 2.0, kPi / 2}, {1.0, 0.0}, 0.5);
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(2.5));
  CHECK(p.a == doctest::Approx(kPi / 2));
}

TEST_CASE("integrate_unicycle quarter circle") {
  // v = w = pi/2 for 1 s: quarter arc of radius 1 ending at (1,1) heading up.
  Pose p = integrate_unicycle({0.0, 0.0, 0.0}, {kPi / 2, kPi / 2}, 1.0);
  CHECK(p.x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.a == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("integrate_unicycle full circle returns to start") {
  Pose p = integrate_unicycle({0.3, -0.2, 0.7}, {kPi / 2, kPi}, 2.0);
  CHECK(p.x == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(p.y == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(p.a == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("integrate_unicycle small-omega limit matches straight formula") {
  Pose arc = integrate_unicycle({0, 0, 0.3}, {1.0, 1e-6}, 0.01);
  // straight-line displacement with the same v
  double sx = 1.0 * 0.01 * std::cos(0.3);
  double sy = 1.0 * 0.01 * std::sin(0.3);
  CHECK(std::abs(arc.x - sx) < 1e-8);
  CHECK(std::abs(arc.y - sy) < 1e-8);
}

TEST_CASE("integration composes: k substeps equal one step") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Pose p0{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-3, 3)};
    BodyTwist t{rng.uniform(-0.5, 0.5), rng.uniform(-2, 2)};
    double dt = rng.uniform(0.05, 0.5);
    int k = 1 + static_cast<int>(rng.uniform_int(20));
    Pose one = integrate_unicycle(p0, t, dt);
    Pose many = p0;
    for (int i = 0; i < k; ++i) many = integrate_unicycle(many, t, dt / k);
    CHECK(std::abs(many.x - one.x) < 1e-10);
    CHECK(std::abs(many.y - one.y) < 1e-10);
    CHECK(std::abs(wrap_angle(many.a - one.a)) < 1e-10);
  }
}

TEST_CASE("odometry_update frozen examples") {
  // one full revolution on both wheels: straight ahead by 2*pi*R
  Pose p = odometry_update({0, 0, 0}, {512, 512}, kGeom);
  CHECK(p.x == doctest::Approx(0.3141592653589793).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(0.0));
  CHECK(p.a == doctest::Approx(0.0));

  // half-rev opposite: pure rotation by pi/2, no translation
  p = odometry_update({0, 0, 0}, {-256, 256}, kGeom);
  CHECK(p.x == doctest::Approx(0.0));
  CHECK(p.y == doctest::Approx(0.0));
  CHECK(p.a == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("odometry uses the old heading for the displacement") {
  // Starting at heading 0, equal large deltas still move along +x even
  // though the deltas came with a heading change of zero; pair a rotation
  // step and check the translation direction matches the heading before it.
  Pose p{0, 0, kPi / 2};
  p = odometry_update(p, {100, 100}, kGeom);
  CHECK(p.x == doctest::Approx(0.0));
  CHECK(p.y > 0.0);

  Pose q{0, 0, 0};
  q = odometry_update(q, {0, 200}, kGeom);
  // displacement projected with a=0: all of D_c lands on x
  double per_tick = 2 * kPi * kGeom.wheel_radius / kGeom.ticks_per_rev;
  CHECK(q.x == doctest::Approx(200 * per_tick / 2).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(0.0));
}

TEST_CASE("straight-run odometry stays within one tick arc of ground truth") {
  // Quantize wheel angles to ticks like an encoder would and dead-reckon;
  // the error against exact integration must stay below one tick arc.
  double tick_arc = 2 * kPi * kGeom.wheel_radius / kGeom.ticks_per_rev;
  double v = 0.25, dt = 0.01;
  double wheel_w = v / kGeom.wheel_radius;  // both wheels, rad/s
  double angle = 0;
  long long emitted = 0;
  Pose odo{0, 0, 0};
  double truth_x = 0;
  for (int k = 0; k < 920; ++k) {
    angle += wheel_w * dt;
    long long total = static_cast<long long>(
        std::floor(angle * kGeom.ticks_per_rev / (2 * kPi)));
    EncoderDelta d{total - emitted, total - emitted};
    emitted = total;
    odo = odometry_update(odo, d, kGeom);
    truth_x += v * dt;
    CHECK(std::abs(odo.x - truth_x) < tick_arc);
    CHECK(odo.y == doctest::Approx(0.0));
    CHECK(odo.a == doctest::Approx(0.0));
  }
  CHECK(truth_x == doctest::Approx(2.3));
}
