#pragma once
#include <optional>
#include <string>
#include <vector>

#include "follower/episode.hpp"
#include "follower/planner.hpp"
#include "follower/vision.hpp"
#include "follower/world.hpp"

#include <json.hpp>

namespace follower::io {

// Binary PPM (P6), maxval 255. Readers accept comment lines; writers never
// emit them. Both throw std::runtime_error on I/O or format trouble.
void write_ppm(const std::string& path, const vision::Frame& frame);
vision::Frame read_ppm(const std::string& path);

// Demonstration CSV with header left_cm,right_cm,x_angle,proximity,v,omega.
// Doubles are printed with %.17g so rereads are exact.
void write_dataset_csv(const std::string& path,
                       const planner::DemoDataset& ds);
planner::DemoDataset read_dataset_csv(const std::string& path);

void write_trace_csv(const std::string& path,
                     const std::vector<episode::TraceRow>& rows);

// Model bundle as versioned JSON (layer sizes, row-major weights, biases,
// scaler, training seed).
void write_model_json(const std::string& path, const planner::ModelBundle& m);
planner::ModelBundle read_model_json(const std::string& path);

void write_environment_json(const std::string& path,
                            const world::Environment& env);
world::Environment read_environment_json(const std::string& path);

nlohmann::json summary_json(const episode::EpisodeSummary& s);
nlohmann::json detection_json(const std::optional<vision::Detection>& det);

}  // namespace follower::io
