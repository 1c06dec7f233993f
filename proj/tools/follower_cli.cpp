// follower: command-line front end for the object-follower simulator.
// Subcommands cover dataset generation, training, episode simulation,
// detection on image files, step-response analysis, environment listing,
// and a repro pipeline that chains all of them.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "follower/config.hpp"
#include "follower/control.hpp"
#include "follower/episode.hpp"
#include "follower/io.hpp"
#include "follower/planner.hpp"
#include "follower/world.hpp"

namespace fs = std::filesystem;
using follower::config::SimConfig;
using nlohmann::json;

namespace {

// Invocation problems (bad flags, missing input files) exit 1; failures
// while actually doing the work exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path,
                  "JSON file of config overrides, e.g. {\"control.kp\": 1.5}");
  cmd->add_option("--set", opts.sets, "config override key=value, repeatable")
      ->allow_extra_args(false);
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("no such file: " + path);
}

void ensure_parent(const std::string& path) {
  fs::path p = fs::path(path).parent_path();
  if (!p.empty()) fs::create_directories(p);
}

double parse_number(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  double v = std::strtod(c, &end);
  if (end == c || *end != '\0')
    throw std::invalid_argument("not a number: " + s);
  return v;
}

SimConfig build_config(const CommonOpts& opts) {
  SimConfig cfg;
  try {
    if (!opts.config_path.empty()) {
      require_file(opts.config_path);
      follower::config::apply_config_file(cfg, opts.config_path);
    }
    for (const std::string& kv : opts.sets) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got: " + kv);
      follower::config::apply_override(cfg, kv.substr(0, eq),
                                       parse_number(kv.substr(eq + 1)));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_json(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << text;
}

follower::world::Environment resolve_env(const std::string& name) {
  for (const auto& env : follower::world::builtin_environments())
    if (env.name == name) return env;
  require_file(name);
  return follower::io::read_environment_json(name);
}

void write_step_csv(const std::string& path,
                    const std::vector<follower::control::StepTracePoint>& tr) {
  std::string out = "t,setpoint,output,u\n";
  for (const auto& p : tr)
    out += num(p.t) + "," + num(p.setpoint) + "," + num(p.output) + "," +
           num(p.u) + "\n";
  ensure_parent(path);
  write_text(path, out);
}

json step_metrics_json(const follower::control::StepMetrics& m) {
  json j;
  j["rise_time_s"] = m.rise_time_s ? json(*m.rise_time_s) : json(nullptr);
  j["settling_time_s"] =
      m.settling_time_s ? json(*m.settling_time_s) : json(nullptr);
  j["overshoot_pct"] = m.overshoot_pct;
  return j;
}

int cmd_gen_data(const SimConfig& cfg, int rows, std::uint64_t seed,
                 const std::string& out) {
  if (rows < 1) throw UsageError("--rows must be positive");
  auto ds = follower::episode::generate_dataset(rows, seed, cfg);
  ensure_parent(out);
  follower::io::write_dataset_csv(out, ds);
  print_json({{"rows", ds.rows.size()}, {"out", out}});
  return 0;
}

int cmd_train(const SimConfig& cfg, const std::string& data,
              const std::string& out, std::uint64_t seed,
              std::optional<int> epochs) {
  require_file(data);
  auto ds = follower::io::read_dataset_csv(data);
  int e = epochs.value_or(cfg.training.epochs);
  auto bundle = follower::planner::train_bundle(ds, e,
                                                cfg.training.batch_size, seed);
  ensure_parent(out);
  follower::io::write_model_json(out, bundle);
  auto losses = follower::planner::evaluate_bundle(bundle, ds);
  print_json({{"out", out},
              {"epochs", e},
              {"v_mae_train", losses.v_train},
              {"v_mae_val", losses.v_val},
              {"w_mse_train", losses.w_train},
              {"w_mse_val", losses.w_val}});
  return 0;
}

// Returns the summary as JSON (with env name and seed echoed) so callers can
// write or print it.
json simulate_once(const SimConfig& cfg,
                   const follower::world::Environment& env,
                   const follower::planner::ModelBundle& model,
                   std::uint64_t seed, const std::string& trace_path,
                   const std::string& frames_dir) {
  using follower::episode::TraceRow;
  std::vector<TraceRow> trace;
  follower::episode::FrameSink sink;
  std::string index_csv;
  if (!frames_dir.empty()) {
    fs::create_directories(frames_dir);
    index_csv = "tick,file,detected,x_angle,y_px,radius_px,proximity\n";
    sink = [&](int tick, const follower::vision::Frame& frame,
               const std::optional<follower::vision::Detection>& det) {
      char name[32];
      std::snprintf(name, sizeof name, "tick_%04d.ppm", tick);
      follower::io::write_ppm((fs::path(frames_dir) / name).string(), frame);
      if (det) {
        index_csv += std::to_string(tick) + "," + name + ",1," +
                     num(det->x_angle) + "," + num(det->y_px) + "," +
                     num(det->radius_px) + "," +
                     (det->proximity == follower::vision::Proximity::Close
                          ? "close"
                          : "far") +
                     "\n";
      } else {
        index_csv += std::to_string(tick) + "," + name + ",0,,,,\n";
      }
    };
  }
  auto plan = follower::episode::model_plan(model);
  auto summary = follower::episode::run_episode(env, cfg, plan, &trace,
                                                nullptr, sink);
  ensure_parent(trace_path);
  follower::io::write_trace_csv(trace_path, trace);
  if (!frames_dir.empty())
    write_text((fs::path(frames_dir) / "index.csv").string(), index_csv);
  json j = follower::io::summary_json(summary);
  j["env"] = env.name;
  j["seed"] = seed;
  return j;
}

int cmd_simulate(const SimConfig& cfg, const std::string& env_arg,
                 const std::string& model_path, std::uint64_t seed,
                 const std::string& trace_path,
                 const std::string& frames_dir) {
  auto env = resolve_env(env_arg);
  require_file(model_path);
  auto model = follower::io::read_model_json(model_path);
  print_json(simulate_once(cfg, env, model, seed, trace_path, frames_dir));
  return 0;
}

int cmd_detect(const SimConfig& cfg, const std::string& image,
               const std::string& out) {
  require_file(image);
  auto frame = follower::io::read_ppm(image);
  auto det = follower::vision::detect_object(frame, cfg.vision);
  if (det) follower::vision::annotate(frame, *det);
  ensure_parent(out);
  follower::io::write_ppm(out, frame);
  print_json(follower::io::detection_json(det));
  return 0;
}

int cmd_step_response(const SimConfig& cfg, std::optional<double> kp,
                      std::optional<double> ki, std::optional<double> tau,
                      const std::string& out) {
  follower::control::PidGains gains = cfg.gains;
  if (kp) gains.kp = *kp;
  if (ki) gains.ki = *ki;
  double plant_tau = tau.value_or(cfg.plant_tau);
  std::vector<follower::control::StepTracePoint> trace;
  auto metrics = follower::control::step_response_metrics(
      gains, plant_tau, 0.001, 4.0, 1.0, &trace);
  if (trace.empty() || !std::isfinite(trace.back().output))
    throw std::runtime_error("step response diverged");
  write_step_csv(out, trace);
  json j = step_metrics_json(metrics);
  j["kp"] = gains.kp;
  j["ki"] = gains.ki;
  j["tau"] = plant_tau;
  j["out"] = out;
  print_json(j);
  return 0;
}

int cmd_envs(const std::string& dump_dir) {
  auto envs = follower::world::builtin_environments();
  if (!dump_dir.empty()) fs::create_directories(dump_dir);
  json list = json::array();
  for (const auto& env : envs) {
    list.push_back({{"name", env.name},
                    {"path_length_m", follower::world::path_length(env)},
                    {"obstacles", env.obstacles.size()},
                    {"waypoints", env.target_path.size()}});
    if (!dump_dir.empty())
      follower::io::write_environment_json(
          (fs::path(dump_dir) / (env.name + ".json")).string(), env);
  }
  print_json(list);
  return 0;
}

int cmd_repro(const SimConfig& cfg, std::uint64_t seed,
              const std::string& out_dir, std::optional<int> rows,
              std::optional<int> epochs) {
  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  int n_rows = rows.value_or(cfg.training.dataset_rows);
  if (n_rows < 1) throw UsageError("--rows must be positive");
  auto ds = follower::episode::generate_dataset(n_rows, seed, cfg);
  follower::io::write_dataset_csv((dir / "data.csv").string(), ds);

  std::vector<double> v_train, w_train, v_val, w_val;
  auto bundle = follower::planner::train_bundle(
      ds, epochs.value_or(cfg.training.epochs), cfg.training.batch_size, seed,
      &v_train, &w_train, &v_val, &w_val);
  follower::io::write_model_json((dir / "model.json").string(), bundle);
  std::string loss_csv = "epoch,v_train,v_val,w_train,w_val\n";
  for (std::size_t i = 0; i < v_train.size(); ++i)
    loss_csv += std::to_string(i + 1) + "," + num(v_train[i]) + "," +
                num(v_val[i]) + "," + num(w_train[i]) + "," + num(w_val[i]) +
                "\n";
  write_text((dir / "training_loss.csv").string(), loss_csv);

  std::vector<follower::control::StepTracePoint> step_trace;
  follower::control::step_response_metrics(cfg.gains, cfg.plant_tau, 0.001,
                                           4.0, 1.0, &step_trace);
  write_step_csv((dir / "step_response.csv").string(), step_trace);

  json episodes = json::array();
  auto envs = follower::world::builtin_environments();
  for (std::size_t i = 0; i < envs.size(); ++i) {
    std::string suffix = "env" + std::to_string(i + 1);
    json j = simulate_once(cfg, envs[i], bundle, seed + i,
                           (dir / ("trace_" + suffix + ".csv")).string(), "");
    write_text((dir / ("summary_" + suffix + ".json")).string(),
               j.dump(2) + "\n");
    episodes.push_back(j);
  }
  print_json({{"out", out_dir},
              {"rows", ds.rows.size()},
              {"episodes", episodes}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic 2D object-follower simulator"};
  app.require_subcommand(1);
  CommonOpts common;

  auto* gen = app.add_subcommand("gen-data",
                                 "generate a demonstration dataset CSV");
  int gd_rows = 0;
  std::uint64_t gd_seed = 0;
  std::string gd_out;
  gen->add_option("--rows", gd_rows, "number of dataset rows")->required();
  gen->add_option("--seed", gd_seed, "random seed")->required();
  gen->add_option("--out", gd_out, "output CSV path")->required();
  add_common(gen, common);

  auto* train = app.add_subcommand("train", "train the planner networks");
  std::string tr_data, tr_out;
  std::uint64_t tr_seed = 0;
  std::optional<int> tr_epochs;
  train->add_option("--data", tr_data, "dataset CSV from gen-data")
      ->required();
  train->add_option("--out", tr_out, "output model JSON path")->required();
  train->add_option("--seed", tr_seed, "random seed")->required();
  train->add_option("--epochs", tr_epochs, "training epochs");
  add_common(train, common);

  auto* sim = app.add_subcommand("simulate", "run one episode with a model");
  std::string si_env, si_model, si_trace, si_frames;
  std::uint64_t si_seed = 0;
  sim->add_option("--env", si_env,
                  "environment: env1, env2, env3, or a JSON file")
      ->required();
  sim->add_option("--model", si_model, "model JSON from train")->required();
  sim->add_option("--seed", si_seed,
                  "episode seed, echoed in the summary (the simulation "
                  "itself is noise-free)")
      ->required();
  sim->add_option("--trace", si_trace, "output trace CSV path")->required();
  sim->add_option("--frames", si_frames,
                  "directory for per-tick camera frames and index.csv");
  add_common(sim, common);

  auto* det = app.add_subcommand("detect", "detect the target in a PPM image");
  std::string de_image, de_out;
  det->add_option("--image", de_image, "input PPM (P6)")->required();
  det->add_option("--out", de_out, "annotated output PPM")->required();
  add_common(det, common);

  auto* step = app.add_subcommand("step-response",
                                  "closed-loop step response CSV and metrics");
  std::optional<double> sr_kp, sr_ki, sr_tau;
  std::string sr_out;
  step->add_option("--kp", sr_kp, "proportional gain");
  step->add_option("--ki", sr_ki, "integral gain");
  step->add_option("--tau", sr_tau, "plant time constant, s");
  step->add_option("--out", sr_out, "output CSV path")->required();
  add_common(step, common);

  auto* envs = app.add_subcommand("envs", "list the built-in environments");
  std::string ev_dump;
  envs->add_option("--dump", ev_dump, "write env JSON files here");
  add_common(envs, common);

  auto* repro = app.add_subcommand(
      "repro", "gen-data, train, step-response, and all three episodes");
  std::uint64_t rp_seed = 0;
  std::string rp_out;
  std::optional<int> rp_rows, rp_epochs;
  repro->add_option("--seed", rp_seed, "random seed")->required();
  repro->add_option("--out", rp_out, "output directory")->required();
  repro->add_option("--rows", rp_rows, "dataset rows");
  repro->add_option("--epochs", rp_epochs, "training epochs");
  add_common(repro, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    SimConfig cfg = build_config(common);
    if (gen->parsed()) return cmd_gen_data(cfg, gd_rows, gd_seed, gd_out);
    if (train->parsed())
      return cmd_train(cfg, tr_data, tr_out, tr_seed, tr_epochs);
    if (sim->parsed())
      return cmd_simulate(cfg, si_env, si_model, si_seed, si_trace,
                          si_frames);
    if (det->parsed()) return cmd_detect(cfg, de_image, de_out);
    if (step->parsed())
      return cmd_step_response(cfg, sr_kp, sr_ki, sr_tau, sr_out);
    if (envs->parsed()) return cmd_envs(ev_dump);
    if (repro->parsed())
      return cmd_repro(cfg, rp_seed, rp_out, rp_rows, rp_epochs);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
