#include "follower/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace follower::io {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

// next whitespace-delimited PPM header token, comments run to end of line
std::string ppm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

double parse_double(const std::string& field, const std::string& path) {
  const char* s = field.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0')
    throw std::runtime_error(path + ": bad number '" + field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_ppm(const std::string& path, const vision::Frame& frame) {
  std::ofstream out = open_out(path, true);
  out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(frame.rgb.data()),
            static_cast<std::streamsize>(frame.rgb.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

vision::Frame read_ppm(const std::string& path) {
  std::ifstream in = open_in(path, true);
  if (ppm_token(in) != "P6")
    throw std::runtime_error(path + ": not a binary PPM");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(ppm_token(in));
    h = std::stoi(ppm_token(in));
    maxval = std::stoi(ppm_token(in));
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": malformed PPM header");
  }
  if (w < 1 || h < 1 || maxval != 255)
    throw std::runtime_error(path + ": unsupported PPM dimensions");
  vision::Frame f(w, h);
  in.read(reinterpret_cast<char*>(f.rgb.data()),
          static_cast<std::streamsize>(f.rgb.size()));
  if (in.gcount() != static_cast<std::streamsize>(f.rgb.size()))
    throw std::runtime_error(path + ": truncated PPM data");
  return f;
}

void write_dataset_csv(const std::string& path,
                       const planner::DemoDataset& ds) {
  std::ofstream out = open_out(path);
  out << "left_cm,right_cm,x_angle,proximity,v,omega\n";
  for (const planner::DemoRow& r : ds.rows)
    out << fmt(r.input.left_cm) << ',' << fmt(r.input.right_cm) << ','
        << fmt(r.input.x_angle) << ',' << fmt(r.input.proximity) << ','
        << fmt(r.v) << ',' << fmt(r.w) << '\n';
  if (!out) throw std::runtime_error("short write: " + path);
}

planner::DemoDataset read_dataset_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) ||
      split_csv(line) != std::vector<std::string>{"left_cm", "right_cm",
                                                  "x_angle", "proximity", "v",
                                                  "omega"})
    throw std::runtime_error(path + ": missing dataset header");
  planner::DemoDataset ds;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 6)
      throw std::runtime_error(path + ": expected 6 columns");
    planner::DemoRow r;
    r.input.left_cm = parse_double(f[0], path);
    r.input.right_cm = parse_double(f[1], path);
    r.input.x_angle = parse_double(f[2], path);
    r.input.proximity = parse_double(f[3], path);
    r.v = parse_double(f[4], path);
    r.w = parse_double(f[5], path);
    ds.rows.push_back(r);
  }
  return ds;
}

void write_trace_csv(const std::string& path,
                     const std::vector<episode::TraceRow>& rows) {
  std::ofstream out = open_out(path);
  out << "t,tick,true_x,true_y,true_a,odom_x,odom_y,odom_a,"
         "v_desired,v_commanded,v_actual,w_desired,w_commanded,w_actual,"
         "left_cm,right_cm,x_angle,proximity,detected,target_x,target_y\n";
  for (const episode::TraceRow& r : rows)
    out << fmt(r.t) << ',' << r.tick << ',' << fmt(r.true_x) << ','
        << fmt(r.true_y) << ',' << fmt(r.true_a) << ',' << fmt(r.odom_x)
        << ',' << fmt(r.odom_y) << ',' << fmt(r.odom_a) << ','
        << fmt(r.v_desired) << ',' << fmt(r.v_commanded) << ','
        << fmt(r.v_actual) << ',' << fmt(r.w_desired) << ','
        << fmt(r.w_commanded) << ',' << fmt(r.w_actual) << ','
        << fmt(r.left_cm) << ',' << fmt(r.right_cm) << ',' << fmt(r.x_angle)
        << ',' << r.proximity << ',' << r.detected << ',' << fmt(r.target_x)
        << ',' << fmt(r.target_y) << '\n';
  if (!out) throw std::runtime_error("short write: " + path);
}

namespace {

nlohmann::json net_json(const mlp::MlpNetwork& net) {
  return {{"layer_sizes", net.layer_sizes},
          {"weights", net.weights},
          {"biases", net.biases}};
}

mlp::MlpNetwork net_from_json(const nlohmann::json& j,
                              const std::string& path) {
  mlp::MlpNetwork net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  std::size_t layers =
      net.layer_sizes.size() > 0 ? net.layer_sizes.size() - 1 : 0;
  if (layers == 0 || net.weights.size() != layers ||
      net.biases.size() != layers)
    throw std::runtime_error(path + ": inconsistent network shape");
  for (std::size_t l = 0; l < layers; ++l) {
    std::size_t rows = static_cast<std::size_t>(net.layer_sizes[l + 1]);
    std::size_t cols = static_cast<std::size_t>(net.layer_sizes[l]);
    if (net.layer_sizes[l] < 1 || net.layer_sizes[l + 1] < 1 ||
        net.weights[l].size() != rows * cols || net.biases[l].size() != rows)
      throw std::runtime_error(path + ": inconsistent network shape");
  }
  return net;
}

}  // namespace

void write_model_json(const std::string& path,
                      const planner::ModelBundle& m) {
  nlohmann::json j{{"format", "follower-model"},
                   {"version", 1},
                   {"seed", m.seed},
                   {"scaler", {{"mean", m.scaler.mean}, {"std", m.scaler.std}}},
                   {"v_net", net_json(m.v_net)},
                   {"w_net", net_json(m.w_net)}};
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("short write: " + path);
}

planner::ModelBundle read_model_json(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    if (j.at("format") != "follower-model" || j.at("version") != 1)
      throw std::runtime_error(path + ": not a version 1 model file");
    planner::ModelBundle m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.scaler.mean = j.at("scaler").at("mean").get<std::array<double, 4>>();
    m.scaler.std = j.at("scaler").at("std").get<std::array<double, 4>>();
    m.v_net = net_from_json(j.at("v_net"), path);
    m.w_net = net_from_json(j.at("w_net"), path);
    if (m.v_net.input_size() != 4 || m.w_net.input_size() != 4)
      throw std::runtime_error(path + ": networks must take 4 inputs");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

namespace {

nlohmann::json rect_json(const world::Rect& r) {
  return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

world::Rect rect_from_json(const nlohmann::json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(),
          j.at("w").get<double>(), j.at("h").get<double>()};
}

}  // namespace

void write_environment_json(const std::string& path,
                            const world::Environment& env) {
  nlohmann::json obstacles = nlohmann::json::array();
  for (const world::Rect& r : env.obstacles) obstacles.push_back(rect_json(r));
  nlohmann::json pathj = nlohmann::json::array();
  for (const world::Waypoint& wp : env.target_path)
    pathj.push_back({{"t", wp.t}, {"x", wp.x}, {"y", wp.y}});
  nlohmann::json j{{"name", env.name},
                   {"bounds", rect_json(env.bounds)},
                   {"obstacles", obstacles},
                   {"target_path", pathj},
                   {"robot_start",
                    {{"x", env.robot_start.x},
                     {"y", env.robot_start.y},
                     {"a", env.robot_start.a}}}};
  std::ofstream out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("short write: " + path);
}

world::Environment read_environment_json(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  world::Environment env;
  try {
    env.name = j.at("name").get<std::string>();
    env.bounds = rect_from_json(j.at("bounds"));
    for (const auto& r : j.at("obstacles"))
      env.obstacles.push_back(rect_from_json(r));
    for (const auto& wp : j.at("target_path"))
      env.target_path.push_back({wp.at("t").get<double>(),
                                 wp.at("x").get<double>(),
                                 wp.at("y").get<double>()});
    const auto& rs = j.at("robot_start");
    env.robot_start = {rs.at("x").get<double>(), rs.at("y").get<double>(),
                       rs.at("a").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (!world::environment_valid(env))
    throw std::runtime_error(path + ": environment fails validation");
  return env;
}

nlohmann::json summary_json(const episode::EpisodeSummary& s) {
  const char* outcome = s.outcome == episode::Outcome::Completed ? "completed"
                        : s.outcome == episode::Outcome::Collision
                            ? "collision"
                            : "timeout";
  return {{"outcome", outcome},
          {"duration_s", s.duration_s},
          {"robot_path_m", s.robot_path_m},
          {"final_gap_m", s.final_gap_m},
          {"planner_ticks", s.planner_ticks}};
}

nlohmann::json detection_json(const std::optional<vision::Detection>& det) {
  if (!det) return {{"detected", false}};
  return {{"detected", true},
          {"x_angle", det->x_angle},
          {"y_px", det->y_px},
          {"radius_px", det->radius_px},
          {"proximity",
           det->proximity == vision::Proximity::Close ? "close" : "far"}};
}

}  // namespace follower::io
