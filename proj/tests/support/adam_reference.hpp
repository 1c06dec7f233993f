#pragma once
#include <cmath>
#include <vector>

// Reference Adam written independently of the library implementation and kept
// that way on purpose: flat parameter vector, textbook update with bias
// correction, epsilon added outside the square root. Tests compare the
// library's optimizer against this step by step.
namespace adam_ref {

struct State {
  double eta = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long long t = 0;
  std::vector<double> m, v;
};

inline State make(std::size_t n, double eta = 1e-3, double beta1 = 0.9,
                  double beta2 = 0.999, double eps = 1e-8) {
  State s;
  s.eta = eta;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  s.m.assign(n, 0.0);
  s.v.assign(n, 0.0);
  return s;
}

inline void step(State& s, std::vector<double>& w,
                 const std::vector<double>& g) {
  s.t += 1;
  double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.t));
  double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.t));
  for (std::size_t i = 0; i < w.size(); ++i) {
    s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g[i];
    s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g[i] * g[i];
    double mhat = s.m[i] / bc1;
    double vhat = s.v[i] / bc2;
    w[i] -= s.eta * mhat / (std::sqrt(vhat) + s.eps);
  }
}

}  // namespace adam_ref
