#pragma once
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "follower/kinematics.hpp"
#include "follower/mlp.hpp"
#include "follower/vision.hpp"

namespace follower::planner {

// What the planner sees each tick. proximity is 0.0 (Far) or 1.0 (Close).
struct PlannerInput {
  double left_cm = 400;
  double right_cm = 400;
  double x_angle = 160;
  double proximity = 0;

  std::array<double, 4> features() const {
    return {left_cm, right_cm, x_angle, proximity};
  }
};

struct DemoRow {
  PlannerInput input;
  double v = 0;  // m/s, clamped to [0, 1]
  double w = 0;  // rad/s
};

struct DemoDataset {
  std::vector<DemoRow> rows;
};

// Per-feature standardization fitted on training rows.
struct FeatureScaler {
  std::array<double, 4> mean{0, 0, 0, 0};
  std::array<double, 4> std{1, 1, 1, 1};

  std::array<double, 4> apply(const PlannerInput& in) const;
  bool operator==(const FeatureScaler&) const = default;
};

// Mean and population standard deviation over every row given (callers pass
// the training split). Stds are floored at 1e-8; constant_features reports
// which hit the floor.
FeatureScaler fit_scaler(const DemoDataset& ds,
                         std::vector<int>* constant_features = nullptr);

struct ExpertConfig {
  double k_img = 1.0;
  double k_obs = 0.3;
  double v_max = 0.3;  // m/s
};

// Scripted driver used to label demonstrations. Steers toward the image
// center, biases away from the nearer sensor when something is inside 80 cm,
// slows for nearby obstacles and for off-center targets, and holds v = 0
// when the target is Close.
BodyTwist expert_policy(const PlannerInput& in, const ExpertConfig& cfg = {});

enum class TargetKind { LinearV, AngularW };

struct TrainResult {
  mlp::MlpNetwork net;
  FeatureScaler scaler;
  std::vector<double> train_loss;  // one entry per epoch
  std::vector<double> val_loss;
};

// Seeded shuffle, 80/20 train/validation split, scaler fitted on the train
// split, mini-batch Adam. The same dataset and seed give the same split and
// scaler regardless of target kind, so the v and w nets can share one scaler.
TrainResult train_network(mlp::MlpNetwork net, const DemoDataset& ds,
                          TargetKind target, mlp::LossKind loss, int epochs,
                          int batch_size, std::uint64_t seed);

// Both trained heads plus the shared input scaler.
struct ModelBundle {
  mlp::MlpNetwork v_net;
  mlp::MlpNetwork w_net;
  FeatureScaler scaler;
  std::uint64_t seed = 0;
};

// Network sizes from the reference design.
inline const std::vector<int> kVNetSizes{4, 6, 6, 1};
inline const std::vector<int> kWNetSizes{4, 6, 8, 1};

// Trains both heads on the dataset with shared seed and scaler. The history
// pointers receive per-epoch losses (train and validation split).
ModelBundle train_bundle(const DemoDataset& ds, int epochs, int batch_size,
                         std::uint64_t seed,
                         std::vector<double>* v_history = nullptr,
                         std::vector<double>* w_history = nullptr,
                         std::vector<double>* v_val_history = nullptr,
                         std::vector<double>* w_val_history = nullptr);

struct BundleLosses {
  double v_train = 0, v_val = 0;  // MAE, m/s
  double w_train = 0, w_val = 0;  // MSE, rad^2/s^2
};

// Recomputes the bundle's train/validation split from its seed and measures
// the final losses. ds must be the dataset the bundle was trained on.
BundleLosses evaluate_bundle(const ModelBundle& m, const DemoDataset& ds);

struct PlannerState {
  double last_x_angle = 160;  // image center before any detection
};

// Folds one detection into the planner state and produces the tick's input:
// a detection refreshes last_x_angle, an absent one reuses it. proximity is
// 1 only for a Close detection.
PlannerInput resolve_input(const std::optional<vision::Detection>& det,
                           double left_cm, double right_cm,
                           PlannerState& state);

// Networks on a resolved input. proximity 1 forces rest (0, 0) without
// consulting the networks; v is clamped to [0, 1] m/s.
BodyTwist plan_twist(const ModelBundle& model, const PlannerInput& in);

// resolve_input + plan_twist in one call.
BodyTwist plan_twist(const ModelBundle& model,
                     const std::optional<vision::Detection>& det,
                     double left_cm, double right_cm, PlannerState& state);

}  // namespace follower::planner
