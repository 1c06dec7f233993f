#include "follower/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace follower::mlp {

namespace {

// Forward pass keeping post-activation values per layer; activations[0] is
// the input, activations.back() the (linear) output.
std::vector<std::vector<double>> forward_all(const MlpNetwork& net,
                                             std::span<const double> input) {
  std::vector<std::vector<double>> acts;
  acts.reserve(net.layer_sizes.size());
  acts.emplace_back(input.begin(), input.end());
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    int in = net.layer_sizes[l];
    int out = net.layer_sizes[l + 1];
    std::vector<double> z(out);
    const auto& w = net.weights[l];
    const auto& prev = acts.back();
    for (int o = 0; o < out; ++o) {
      double s = net.biases[l][o];
      const double* row = &w[static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) s += row[i] * prev[i];
      z[o] = s;
    }
    bool hidden = l + 1 < net.layer_count();
    if (hidden)
      for (double& v : z) v = v > 0 ? v : 0.0;
    acts.push_back(std::move(z));
  }
  return acts;
}

}  // namespace

MlpNetwork make_network(const std::vector<int>& layer_sizes, Rng& rng) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("make_network: need at least two layers");
  for (int s : layer_sizes)
    if (s < 1) throw std::invalid_argument("make_network: bad layer size");
  if (layer_sizes.back() != 1)
    throw std::invalid_argument("make_network: scalar output expected");

  MlpNetwork net;
  net.layer_sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    int in = layer_sizes[l];
    int out = layer_sizes[l + 1];
    double limit = std::sqrt(6.0 / (in + out));
    std::vector<double> w(static_cast<std::size_t>(in) * out);
    for (double& x : w) x = rng.uniform(-limit, limit);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(out, 0.0);
  }
  return net;
}

double mlp_forward(const MlpNetwork& net, std::span<const double> input) {
  if (static_cast<int>(input.size()) != net.input_size())
    throw std::invalid_argument("mlp_forward: input size mismatch");
  auto acts = forward_all(net, input);
  return acts.back()[0];
}

double compute_loss(std::span<const double> predictions,
                    std::span<const double> targets, LossKind kind) {
  if (predictions.size() != targets.size() || predictions.empty())
    throw std::invalid_argument("compute_loss: bad array lengths");
  double sum = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double d = predictions[i] - targets[i];
    sum += kind == LossKind::MAE ? std::abs(d) : d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

void Gradients::zero() {
  for (auto& w : weights)
    for (double& x : w) x = 0.0;
  for (auto& b : biases)
    for (double& x : b) x = 0.0;
}

void Gradients::accumulate(const Gradients& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i)
      weights[l][i] += other.weights[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i)
      biases[l][i] += other.biases[l][i];
  }
}

void Gradients::scale(double s) {
  for (auto& w : weights)
    for (double& x : w) x *= s;
  for (auto& b : biases)
    for (double& x : b) x *= s;
}

Gradients make_gradients(const MlpNetwork& net) {
  Gradients g;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    g.weights.emplace_back(net.weights[l].size(), 0.0);
    g.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  return g;
}

Gradients mlp_gradients(const MlpNetwork& net, std::span<const double> input,
                        double target, LossKind kind) {
  if (static_cast<int>(input.size()) != net.input_size())
    throw std::invalid_argument("mlp_gradients: input size mismatch");
  auto acts = forward_all(net, input);
  double y = acts.back()[0];

  double dy;
  if (kind == LossKind::MSE) {
    dy = 2.0 * (y - target);
  } else {
    double d = y - target;
    dy = d > 0 ? 1.0 : (d < 0 ? -1.0 : 0.0);
  }

  Gradients g = make_gradients(net);
  // delta starts at the output layer and is pulled back one layer at a time.
  std::vector<double> delta{dy};
  for (std::size_t l = net.layer_count(); l-- > 0;) {
    int in = net.layer_sizes[l];
    int out = net.layer_sizes[l + 1];
    const auto& a_prev = acts[l];
    for (int o = 0; o < out; ++o) {
      g.biases[l][o] = delta[o];
      double* row = &g.weights[l][static_cast<std::size_t>(o) * in];
      for (int i = 0; i < in; ++i) row[i] = delta[o] * a_prev[i];
    }
    if (l == 0) break;
    std::vector<double> prev_delta(in, 0.0);
    const auto& w = net.weights[l];
    for (int i = 0; i < in; ++i) {
      double s = 0;
      for (int o = 0; o < out; ++o)
        s += w[static_cast<std::size_t>(o) * in + i] * delta[o];
      // ReLU derivative via the stored activation: a > 0 iff z > 0.
      prev_delta[i] = acts[l][i] > 0 ? s : 0.0;
    }
    delta = std::move(prev_delta);
  }
  return g;
}

AdamState make_adam(const MlpNetwork& net, double eta, double beta1,
                    double beta2, double eps) {
  AdamState st;
  st.eta = eta;
  st.beta1 = beta1;
  st.beta2 = beta2;
  st.eps = eps;
  st.m = make_gradients(net);
  st.v = make_gradients(net);
  return st;
}

void adam_step(AdamState& st, MlpNetwork& net, const Gradients& g) {
  st.t += 1;
  double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  auto update = [&](std::vector<double>& w, std::vector<double>& m,
                    std::vector<double>& v, const std::vector<double>& grad) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = st.beta1 * m[i] + (1.0 - st.beta1) * grad[i];
      v[i] = st.beta2 * v[i] + (1.0 - st.beta2) * grad[i] * grad[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      w[i] -= st.eta * mhat / (std::sqrt(vhat) + st.eps);
    }
  };
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    update(net.weights[l], st.m.weights[l], st.v.weights[l], g.weights[l]);
    update(net.biases[l], st.m.biases[l], st.v.biases[l], g.biases[l]);
  }
}

}  // namespace follower::mlp
