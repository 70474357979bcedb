#pragma once

#include "lcp/types.hpp"

#include <cstdint>
#include <random>

namespace lcp {

// splitmix64 finalizer; used to derive independent stream seeds.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t k) { return mix64(seed ^ k); }

// Thin wrapper around mt19937_64. The conversions to uniform and normal
// variates are written out here rather than taken from <random>
// distributions, whose algorithms differ between standard libraries, so
// that a seed reproduces the same numbers everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1).
  double uniform_open() {
    double u;
    do u = uniform();
    while (u == 0.0);
    return u;
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  uint64_t bits() { return gen_(); }
  // Uniform integer in [0, k).
  uint64_t below(uint64_t k) { return static_cast<uint64_t>(uniform() * static_cast<double>(k)) % k; }

  double normal();
  Vec normal_vec(int n);
  Vec unit_vec(int n);
  // Exponential(1) variate.
  double exponential();

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lcp
