#pragma once
#include <span>
#include <vector>

#include "follower/rng.hpp"

namespace follower::mlp {

// Small fully-connected net, ReLU hidden layers, linear scalar output.
// weights[l] is (layer_sizes[l+1] x layer_sizes[l]) row-major.
struct MlpNetwork {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  int input_size() const { return layer_sizes.front(); }
  std::size_t layer_count() const { return weights.size(); }
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
MlpNetwork make_network(const std::vector<int>& layer_sizes, Rng& rng);

double mlp_forward(const MlpNetwork& net, std::span<const double> input);

enum class LossKind { MAE, MSE };

// Mean loss over equal-length prediction/target arrays.
double compute_loss(std::span<const double> predictions,
                    std::span<const double> targets, LossKind kind);

// Same shapes as the network's weights/biases.
struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  void zero();
  void accumulate(const Gradients& other);
  void scale(double s);
};

Gradients make_gradients(const MlpNetwork& net);

// Exact reverse-mode gradients of the single-sample loss. The MAE subgradient
// at prediction == target is 0.
Gradients mlp_gradients(const MlpNetwork& net, std::span<const double> input,
                        double target, LossKind kind);

struct AdamState {
  double eta = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;
  Gradients m;
  Gradients v;
};

AdamState make_adam(const MlpNetwork& net, double eta = 1e-3,
                    double beta1 = 0.9, double beta2 = 0.999,
                    double eps = 1e-8);

// One Adam update with bias correction: w -= eta * mhat / (sqrt(vhat) + eps).
void adam_step(AdamState& st, MlpNetwork& net, const Gradients& g);

}  // namespace follower::mlp
