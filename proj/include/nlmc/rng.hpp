#pragma once

#include <cstdint>
#include <random>

#include "nlmc/geometry.hpp"

namespace nlmc {

// splitmix64 step; used to derive independent substream seeds so that results
// do not depend on evaluation order or thread count.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t substream_seed(uint64_t seed, uint64_t stream) {
  return mix64(mix64(seed) ^ mix64(stream + 0x517cc1b727220a95ull));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  // Uniform in [0, 1) with a fixed 53-bit mapping, identical across platforms.
  double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  Vec unit_vector(int dim) {
    if (dim == 2) {
      double t = uniform(0, 2 * kPi);
      return {std::cos(t), std::sin(t), 0};
    }
    double u = uniform(-1, 1);
    double t = uniform(0, 2 * kPi);
    double r = std::sqrt(std::max(0.0, 1 - u * u));
    return {r * std::cos(t), r * std::sin(t), u};
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace nlmc
