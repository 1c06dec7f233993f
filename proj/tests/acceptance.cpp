// Acceptance gate. Runs every criterion end to end against the real library
// and CLI, prints one PASS/FAIL line per criterion, and exits nonzero if any
// fail. Expensive: full dataset generation, training, and the repro pipeline
// twice.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "follower/config.hpp"
#include "follower/control.hpp"
#include "follower/episode.hpp"
#include "follower/io.hpp"
#include "follower/kinematics.hpp"
#include "follower/mlp.hpp"
#include "follower/planner.hpp"
#include "follower/rng.hpp"
#include "follower/vision.hpp"
#include "follower/world.hpp"
#include "support/adam_reference.hpp"

using namespace follower;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %2d (%s): %s  %s\n", id, name,
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void criterion_1() {
  Rng rng(1);
  RobotGeometry geom;
  double max_err = 0;
  auto start = clock_type::now();
  for (int i = 0; i < 10000; ++i) {
    BodyTwist t{rng.uniform(-1, 1), rng.uniform(-3, 3)};
    BodyTwist back = wheel_to_body_speeds(body_to_wheel_speeds(t, geom), geom);
    max_err = std::max({max_err, std::abs(back.v - t.v),
                        std::abs(back.w - t.w)});
  }
  double secs = seconds_since(start);
  report(1, "kinematics round-trip", max_err <= 1e-12 && secs < 1.0,
         fmt("max err %.2e over 10000 twists in %.3f s", max_err, secs));
}

void criterion_2() {
  RobotGeometry geom;
  double dt = 0.01;

  auto run = [&](const std::vector<std::array<double, 3>>& segments) {
    Pose truth, odo;
    world::EncoderState enc;
    for (const auto& seg : segments) {
      BodyTwist t{seg[0], seg[1]};
      WheelSpeeds ws = body_to_wheel_speeds(t, geom);
      int steps = static_cast<int>(std::lround(seg[2] / dt));
      for (int i = 0; i < steps; ++i) {
        truth = integrate_unicycle(truth, t, dt);
        odo = odometry_update(odo, world::encoder_emulate(ws, dt, geom, enc),
                              geom);
      }
    }
    return std::hypot(truth.x - odo.x, truth.y - odo.y);
  };

  double straight = run({{0.23, 0.0, 10.0}});  // 2.3 m straight
  double mixed = run({{0.25, 0.6, 3.0},
                      {0.2, -0.8, 3.0},
                      {0.3, 0.4, 2.5},
                      {0.15, -0.3, 2.0}});  // 2.4 m of mixed arcs
  report(2, "odometry drift", straight <= 0.002 && mixed <= 0.05,
         fmt("straight 2.3 m err %.2e m, mixed arcs err %.2e m", straight,
             mixed));
}

void criterion_3() {
  world::CameraConfig cam;
  vision::VisionConfig vcfg;
  double f = cam.focal_px();
  Pose robot;  // origin, heading +x
  auto start = clock_type::now();

  int total = 0, detected = 0, consistent = 0, monotone_rows = 0;
  double max_center = 0, max_radius = 0;
  const int nb = 33, nd = 20;
  for (int j = 0; j < nd; ++j) {
    double dist = 0.55 + (2.2 - 0.55) * j / (nd - 1);
    double prev_x = 1e9;
    bool monotone = true;
    for (int i = 0; i < nb; ++i) {
      double bearing = (-25.0 + 50.0 * i / (nb - 1)) * std::numbers::pi / 180;
      ++total;
      vision::Frame frame = world::render_frame(
          robot, dist * std::cos(bearing), dist * std::sin(bearing), cam);
      auto det = vision::detect_object(frame, vcfg);
      if (!det) {
        monotone = false;  // a hole breaks the row's ordering claim
        continue;
      }
      ++detected;
      double cx = 160.0 + f * std::tan(-bearing);
      double radius = f * cam.target_radius_m / dist;
      max_center = std::max(
          max_center, std::hypot(det->x_angle - cx, det->y_px - 120.0));
      max_radius = std::max(max_radius, std::abs(det->radius_px - radius));
      bool close = det->radius_px > vcfg.threshold_radius_px;
      if ((det->proximity == vision::Proximity::Close) == close) ++consistent;
      if (det->x_angle >= prev_x) monotone = false;  // ccw bearing moves left
      prev_x = det->x_angle;
    }
    if (monotone) ++monotone_rows;
  }
  double secs = seconds_since(start);
  double rate = static_cast<double>(detected) / total;
  bool pass = rate >= 0.95 && max_center <= 2.0 && max_radius <= 2.0 &&
              monotone_rows == nd && consistent == detected && secs < 60.0;
  report(3, "vision sweep", pass,
         fmt("rate %.3f, center err %.2f px, radius err %.2f px, monotone "
             "%d/%d rows, proximity %d/%d, %.1f s",
             rate, max_center, max_radius, monotone_rows, nd, consistent,
             detected, secs));
}

double loss_of(const mlp::MlpNetwork& net, std::span<const double> x,
               double target, mlp::LossKind kind) {
  double pred = mlp_forward(net, x);
  return mlp::compute_loss({&pred, 1}, {&target, 1}, kind);
}

void criterion_4() {
  Rng rng(4242);
  const double h = 1e-5;
  double max_rel = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> sizes = trial % 2 == 0 ? std::vector<int>{4, 6, 6, 1}
                                            : std::vector<int>{4, 6, 8, 1};
    mlp::MlpNetwork net = mlp::make_network(sizes, rng);
    for (auto& b : net.biases)
      for (double& v : b) v = rng.uniform(-0.3, 0.3);
    std::array<double, 4> x{rng.uniform(-2, 2), rng.uniform(-2, 2),
                            rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double target = rng.uniform(-1, 1);
    mlp::LossKind kind = trial % 3 == 0 ? mlp::LossKind::MAE
                                        : mlp::LossKind::MSE;
    mlp::Gradients g = mlp_gradients(net, x, target, kind);

    auto check = [&](std::vector<std::vector<double>>& params,
                     const std::vector<std::vector<double>>& grads) {
      for (std::size_t l = 0; l < params.size(); ++l)
        for (std::size_t i = 0; i < params[l].size(); ++i) {
          double save = params[l][i];
          params[l][i] = save + h;
          double lp = loss_of(net, x, target, kind);
          params[l][i] = save - h;
          double lm = loss_of(net, x, target, kind);
          params[l][i] = save;
          double fd = (lp - lm) / (2 * h);
          double a = grads[l][i];
          max_rel = std::max(
              max_rel,
              std::abs(a - fd) / std::max({1.0, std::abs(a), std::abs(fd)}));
        }
    };
    check(net.weights, g.weights);
    check(net.biases, g.biases);
  }
  report(4, "gradient check", max_rel < 1e-5,
         fmt("max relative error %.2e over 100 nets", max_rel));
}

void criterion_5() {
  // both optimizers walk the same quadratic sum_i c_i (w_i - a_i)^2
  Rng rng(777);
  mlp::MlpNetwork net = mlp::make_network({2, 3, 1}, rng);
  for (auto& b : net.biases)
    for (double& v : b) v = rng.uniform(-0.5, 0.5);

  std::vector<double*> params;
  for (auto& w : net.weights)
    for (double& v : w) params.push_back(&v);
  for (auto& b : net.biases)
    for (double& v : b) params.push_back(&v);

  std::size_t n = params.size();
  std::vector<double> flat(n), c(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    flat[i] = *params[i];
    c[i] = rng.uniform(0.5, 2.0);
    a[i] = rng.uniform(-1.0, 1.0);
  }

  mlp::AdamState lib = mlp::make_adam(net);
  adam_ref::State oracle = adam_ref::make(n);
  mlp::Gradients g = mlp::make_gradients(net);
  std::vector<double> flat_g(n);

  double max_diff = 0;
  for (int step = 0; step < 100; ++step) {
    std::size_t k = 0;
    for (auto& w : g.weights)
      for (double& v : w) v = 2.0 * c[k] * (*params[k] - a[k]), ++k;
    for (auto& b : g.biases)
      for (double& v : b) v = 2.0 * c[k] * (*params[k] - a[k]), ++k;
    for (std::size_t i = 0; i < n; ++i)
      flat_g[i] = 2.0 * c[i] * (flat[i] - a[i]);

    mlp::adam_step(lib, net, g);
    adam_ref::step(oracle, flat, flat_g);
    for (std::size_t i = 0; i < n; ++i)
      max_diff = std::max(max_diff, std::abs(*params[i] - flat[i]));
    if (max_diff > 1e-10) break;
  }
  report(5, "adam oracle", max_diff <= 1e-10,
         fmt("max param divergence %.2e over 100 steps, %zu params", max_diff,
             n));
}

// criterion 6 output, reused by 8-10
struct TrainedModel {
  planner::ModelBundle bundle;
  bool ok = false;
};

TrainedModel criterion_6(const config::SimConfig& cfg) {
  TrainedModel out;
  auto start = clock_type::now();
  std::fprintf(stderr, "[acceptance] generating 5000-row dataset...\n");
  planner::DemoDataset ds = episode::generate_dataset(5000, 42, cfg);
  std::fprintf(stderr, "[acceptance] training...\n");
  out.bundle = planner::train_bundle(ds, cfg.training.epochs,
                                     cfg.training.batch_size, 42);
  double secs = seconds_since(start);
  planner::BundleLosses l = planner::evaluate_bundle(out.bundle, ds);
  bool pass = ds.rows.size() == 5000 && cfg.training.epochs <= 500 &&
              l.v_train <= 0.10 && l.v_val <= 0.10 && l.w_train <= 0.0055 &&
              l.w_val <= 0.0055 && secs < 300.0;
  out.ok = pass;
  report(6, "training targets", pass,
         fmt("v MAE %.4f/%.4f, w MSE %.6f/%.6f (train/val), %d epochs, "
             "%.0f s",
             l.v_train, l.v_val, l.w_train, l.w_val, cfg.training.epochs,
             secs));
  return out;
}

void criterion_7(const config::SimConfig& cfg) {
  auto m = control::step_response_metrics(cfg.gains, cfg.plant_tau, 0.001,
                                          4.0);
  bool pass = m.rise_time_s && m.settling_time_s &&
              std::abs(*m.rise_time_s - 0.254) <= 0.08 &&
              std::abs(*m.settling_time_s - 0.451) <= 0.15 &&
              m.overshoot_pct < 2.0;
  report(7, "step response", pass,
         fmt("rise %.3f s, settle %.3f s, overshoot %.2f%%",
             m.rise_time_s.value_or(-1), m.settling_time_s.value_or(-1),
             m.overshoot_pct));
}

void criterion_8(const config::SimConfig& cfg, const TrainedModel& model) {
  if (!model.ok) {
    report(8, "episodes", false, "skipped: no trained model");
    return;
  }
  struct Band {
    double center, width;
  };
  const Band duration_bands[3] = {{19.0, 5.0}, {12.5, 4.0}, {13.0, 4.0}};
  auto envs = world::builtin_environments();
  bool pass = true;
  std::string detail;
  episode::PlanFn plan = episode::model_plan(model.bundle);
  for (std::size_t i = 0; i < envs.size(); ++i) {
    auto start = clock_type::now();
    episode::EpisodeSummary s = episode::run_episode(envs[i], cfg, plan);
    double wall = seconds_since(start);
    bool ok = s.outcome == episode::Outcome::Completed &&
              std::abs(s.duration_s - duration_bands[i].center) <=
                  duration_bands[i].width &&
              wall < 10.0;
    if (i == 0) ok = ok && std::abs(s.robot_path_m - 2.3) <= 0.4;
    pass = pass && ok;
    if (i) detail += "; ";
    detail += fmt("env%zu %s %.1f s path %.2f m wall %.1f s", i + 1,
                  s.outcome == episode::Outcome::Completed ? "completed"
                  : s.outcome == episode::Outcome::Collision ? "collision"
                                                             : "timeout",
                  s.duration_s, s.robot_path_m, wall);
  }
  report(8, "episodes", pass, detail);
}

void criterion_9(const config::SimConfig& cfg, const TrainedModel& model) {
  if (!model.ok) {
    report(9, "rest rule", false, "skipped: no trained model");
    return;
  }
  world::Environment env;
  env.name = "static_close";
  env.bounds = {0, 0, 4, 3};
  env.robot_start = {1.0, 1.5, 0.0};
  env.target_path = {{0.0, 1.28, 1.5}};  // 0.28 m ahead, inside Close range
  std::vector<episode::TraceRow> trace;
  episode::EpisodeSummary s = episode::run_episode(
      env, cfg, episode::model_plan(model.bundle), &trace);
  double disp = trace.empty()
                    ? 1e9
                    : std::hypot(trace.back().true_x - env.robot_start.x,
                                 trace.back().true_y - env.robot_start.y);
  report(9, "rest rule", disp < 0.05,
         fmt("displacement %.4f m, outcome %s, duration %.1f s", disp,
             s.outcome == episode::Outcome::Completed ? "completed" : "other",
             s.duration_s));
}

void criterion_10(const config::SimConfig& cfg, const TrainedModel& model) {
  if (!model.ok) {
    report(10, "obstacle reaction", false, "skipped: no trained model");
    return;
  }
  // an obstacle teleporting into the left sensor's view is, to the planner,
  // a step change in its input between two ticks
  planner::PlannerInput before{400, 400, 160, 0};
  planner::PlannerInput after{35, 300, 160, 0};
  BodyTwist t0 = planner::plan_twist(model.bundle, before);
  BodyTwist t1 = planner::plan_twist(model.bundle, after);
  bool reacts = t0.v > 0 && t1.v <= 0.5 * t0.v && std::abs(t1.w) >
                std::abs(t0.w);

  // and driving past a wall-adjacent obstacle must not end in contact
  world::Environment env;
  env.name = "near_obstacle";
  env.bounds = {0, 0, 4, 3};
  env.robot_start = {0.5, 1.5, 0.0};
  env.obstacles = {{1.7, 1.7, 0.3, 0.3}};
  env.target_path = {{0.0, 1.0, 1.5}, {12.0, 3.3, 1.5}};
  episode::EpisodeSummary s =
      episode::run_episode(env, cfg, episode::model_plan(model.bundle));
  bool no_collision = s.outcome != episode::Outcome::Collision;
  report(10, "obstacle reaction", reacts && no_collision,
         fmt("v %.3f -> %.3f, |w| %.3f -> %.3f, episode %s", t0.v, t1.v,
             std::abs(t0.w), std::abs(t1.w),
             s.outcome == episode::Outcome::Completed ? "completed"
             : s.outcome == episode::Outcome::Collision ? "collision"
                                                        : "timeout"));
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return "<unreadable:" + p.string() + ">";
  return {std::istreambuf_iterator<char>(f), {}};
}

void criterion_11() {
  fs::path base = fs::temp_directory_path() / "follower_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);
  fs::path a = base / "repro_a", b = base / "repro_b";
  std::string cmd_a = std::string(CLI_BIN) + " repro --seed 42 --out " +
                      a.string() + " > /dev/null 2>&1";
  std::string cmd_b = std::string(CLI_BIN) + " repro --seed 42 --out " +
                      b.string() + " > /dev/null 2>&1";
  std::fprintf(stderr, "[acceptance] repro run 1/2...\n");
  int ra = std::system(cmd_a.c_str());
  std::fprintf(stderr, "[acceptance] repro run 2/2...\n");
  int rb = std::system(cmd_b.c_str());
  if (ra != 0 || rb != 0) {
    report(11, "repro determinism", false,
           fmt("repro exited %d and %d", ra, rb));
    return;
  }
  const char* files[] = {"data.csv",       "model.json",
                         "training_loss.csv", "step_response.csv",
                         "trace_env1.csv", "trace_env2.csv",
                         "trace_env3.csv", "summary_env1.json",
                         "summary_env2.json", "summary_env3.json"};
  int same = 0, count = 0;
  std::string first_diff;
  for (const char* f : files) {
    ++count;
    if (slurp(a / f) == slurp(b / f))
      ++same;
    else if (first_diff.empty())
      first_diff = f;
  }
  bool pass = same == count;
  report(11, "repro determinism", pass,
         pass ? fmt("%d/%d outputs byte-identical across reruns", same, count)
              : fmt("%d/%d identical, first difference %s", same, count,
                    first_diff.c_str()));
}

}  // namespace

int main() {
  config::SimConfig cfg;
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  TrainedModel model = criterion_6(cfg);
  criterion_7(cfg);
  criterion_8(cfg, model);
  criterion_9(cfg, model);
  criterion_10(cfg, model);
  criterion_11();
  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
