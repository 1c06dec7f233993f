#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace follower {

// Deterministic RNG used wherever seeding matters. Raw draws come from
// std::mt19937_64 (sequence fixed by the standard); conversion to doubles and
// bounded ints is done by hand so results never depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n), n > 0. Modulo bias is irrelevant at our n.
  std::uint64_t uniform_int(std::uint64_t n) { return next() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace follower
