#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "follower/mlp.hpp"
#include "follower/rng.hpp"
#include "support/adam_reference.hpp"

using namespace follower;
using namespace follower::mlp;

namespace {

// Flatten network parameters in a fixed order (weights then biases, layer by
// layer) so the reference optimizer can run on the same values.
std::vector<double> flatten(const MlpNetwork& net) {
  std::vector<double> out;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    out.insert(out.end(), net.weights[l].begin(), net.weights[l].end());
    out.insert(out.end(), net.biases[l].begin(), net.biases[l].end());
  }
  return out;
}

std::vector<double> flatten(const Gradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    out.insert(out.end(), g.weights[l].begin(), g.weights[l].end());
    out.insert(out.end(), g.biases[l].begin(), g.biases[l].end());
  }
  return out;
}

double loss_of(const MlpNetwork& net, std::span<const double> x, double target,
               LossKind kind) {
  double y = mlp_forward(net, x);
  std::array<double, 1> p{y}, t{target};
  return compute_loss(p, t, kind);
}

}  // namespace

TEST_CASE("make_network shapes and init bounds") {
  Rng rng(42);
  MlpNetwork net = make_network({4, 6, 6, 1}, rng);
  REQUIRE(net.layer_count() == 3);
  CHECK(net.weights[0].size() == 24);
  CHECK(net.weights[1].size() == 36);
  CHECK(net.weights[2].size() == 6);
  CHECK(net.biases[2].size() == 1);

  double lim0 = std::sqrt(6.0 / (4 + 6));
  for (double w : net.weights[0]) CHECK(std::abs(w) <= lim0);
  for (const auto& b : net.biases)
    for (double x : b) CHECK(x == 0.0);

  // seeded determinism
  Rng r1(7), r2(7), r3(8);
  MlpNetwork a = make_network({4, 6, 8, 1}, r1);
  MlpNetwork b = make_network({4, 6, 8, 1}, r2);
  MlpNetwork c = make_network({4, 6, 8, 1}, r3);
  CHECK(a.weights[0] == b.weights[0]);
  CHECK(a.weights[0] != c.weights[0]);
}

TEST_CASE("forward pass through an identity path") {
  Rng rng(1);
  MlpNetwork net = make_network({4, 6, 6, 1}, rng);
  for (auto& w : net.weights)
    for (double& x : w) x = 0.0;
  net.weights[0][0] = 1.0;  // unit 0 reads input 0
  net.weights[1][0] = 1.0;  // second layer unit 0 reads unit 0
  net.weights[2][0] = 1.0;  // output reads unit 0
  std::array<double, 4> pos{2.0, 0.0, 0.0, 0.0};
  std::array<double, 4> neg{-2.0, 0.0, 0.0, 0.0};
  CHECK(mlp_forward(net, pos) == doctest::Approx(2.0));
  CHECK(mlp_forward(net, neg) == doctest::Approx(0.0));  // ReLU clips
}

TEST_CASE("compute_loss values and errors") {
  std::array<double, 2> p{1.0, 2.0}, t{0.0, 0.0};
  CHECK(compute_loss(p, t, LossKind::MAE) == doctest::Approx(1.5));
  CHECK(compute_loss(p, t, LossKind::MSE) == doctest::Approx(2.5));

  std::array<double, 1> p1{0.3}, t1{0.0};
  CHECK(compute_loss(p1, t1, LossKind::MAE) == doctest::Approx(0.3));
  CHECK(compute_loss(p1, t1, LossKind::MSE) == doctest::Approx(0.09));

  std::array<double, 2> longer{0, 0};
  CHECK_THROWS_AS(compute_loss(p1, longer, LossKind::MAE),
                  std::invalid_argument);
  CHECK_THROWS_AS(compute_loss(std::span<const double>{},
                               std::span<const double>{}, LossKind::MSE),
                  std::invalid_argument);
}

TEST_CASE("single linear neuron gradient") {
  MlpNetwork net;
  net.layer_sizes = {1, 1};
  net.weights = {{1.0}};
  net.biases = {{0.0}};
  std::array<double, 1> x{2.0};
  Gradients g = mlp_gradients(net, x, 0.0, LossKind::MSE);
  // d/dw (wx - y)^2 = 2(wx - y) x = 2*2*2 = 8
  CHECK(g.weights[0][0] == doctest::Approx(8.0));
  CHECK(g.biases[0][0] == doctest::Approx(4.0));
}

TEST_CASE("MAE subgradient is zero at an exact match") {
  MlpNetwork net;
  net.layer_sizes = {1, 1};
  net.weights = {{1.0}};
  net.biases = {{0.0}};
  std::array<double, 1> x{2.0};
  Gradients g = mlp_gradients(net, x, 2.0, LossKind::MAE);
  CHECK(g.weights[0][0] == 0.0);
  CHECK(g.biases[0][0] == 0.0);
}

TEST_CASE("backprop matches central finite differences") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> sizes =
        trial % 2 == 0 ? std::vector<int>{4, 6, 6, 1} : std::vector<int>{4, 6, 8, 1};
    MlpNetwork net = make_network(sizes, rng);
    // nonzero biases so their gradients are exercised too
    for (auto& b : net.biases)
      for (double& x : b) x = rng.uniform(-0.3, 0.3);
    std::array<double, 4> x{rng.uniform(-2, 2), rng.uniform(-2, 2),
                            rng.uniform(-2, 2), rng.uniform(-2, 2)};
    double target = rng.uniform(-1, 1);
    LossKind kind = trial % 3 == 0 ? LossKind::MAE : LossKind::MSE;

    Gradients g = mlp_gradients(net, x, target, kind);
    const double h = 1e-5;
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
        double save = net.weights[l][i];
        net.weights[l][i] = save + h;
        double lp = loss_of(net, x, target, kind);
        net.weights[l][i] = save - h;
        double lm = loss_of(net, x, target, kind);
        net.weights[l][i] = save;
        double fd = (lp - lm) / (2 * h);
        double a = g.weights[l][i];
        double rel = std::abs(a - fd) / std::max({1.0, std::abs(a), std::abs(fd)});
        CHECK(rel < 1e-5);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("adam first step magnitude is the learning rate") {
  MlpNetwork net;
  net.layer_sizes = {1, 1};
  net.weights = {{0.0}};
  net.biases = {{0.0}};
  AdamState st = make_adam(net, 1e-3);
  Gradients g = make_gradients(net);
  g.weights[0][0] = -6.0;
  g.biases[0][0] = 0.0;
  adam_step(st, net, g);
  CHECK(std::abs(net.weights[0][0]) == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("adam matches the reference on a quadratic descent") {
  MlpNetwork net;
  net.layer_sizes = {1, 1};
  net.weights = {{0.0}};
  net.biases = {{0.0}};
  AdamState st = make_adam(net, 0.1);

  std::vector<double> w_ref{0.0};
  adam_ref::State ref = adam_ref::make(1, 0.1);

  for (int step = 0; step < 100; ++step) {
    double g_impl = 2.0 * (net.weights[0][0] - 3.0);
    double g_ref = 2.0 * (w_ref[0] - 3.0);
    Gradients g = make_gradients(net);
    g.weights[0][0] = g_impl;
    adam_step(st, net, g);
    std::vector<double> gv{g_ref};
    adam_ref::step(ref, w_ref, gv);
    CHECK(std::abs(net.weights[0][0] - w_ref[0]) <= 1e-10);
  }
  // and it actually descends toward the minimum
  CHECK(std::abs(net.weights[0][0] - 3.0) < 3.0);
}

TEST_CASE("adam matches the reference across a whole network") {
  Rng rng(5);
  MlpNetwork net = make_network({4, 6, 8, 1}, rng);
  AdamState st = make_adam(net);
  std::vector<double> w_ref = flatten(net);
  adam_ref::State ref = adam_ref::make(w_ref.size());

  for (int step = 0; step < 50; ++step) {
    Gradients g = make_gradients(net);
    for (auto& layer : g.weights)
      for (double& x : layer) x = rng.uniform(-1, 1);
    for (auto& layer : g.biases)
      for (double& x : layer) x = rng.uniform(-1, 1);
    std::vector<double> g_flat = flatten(g);
    adam_step(st, net, g);
    adam_ref::step(ref, w_ref, g_flat);
    std::vector<double> w_now = flatten(net);
    for (std::size_t i = 0; i < w_now.size(); ++i)
      CHECK(std::abs(w_now[i] - w_ref[i]) <= 1e-12);
  }
}
