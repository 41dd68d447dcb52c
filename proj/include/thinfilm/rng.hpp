#pragma once

#include <cstdint>
#include <cmath>
#include <random>

#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Deterministic random source for property suites and the random_decay
// initial-data preset.  Raw mt19937_64 output is converted to doubles with
// an explicit (x >> 11) * 2^-53 map instead of std::uniform_real_distribution,
// whose draw sequence is implementation defined; identical seeds must
// reproduce identical trajectories across compilers.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer in [lo, hi] by rejection-free scaling (bias is
  // negligible for the tiny ranges used here and, more importantly,
  // deterministic).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform01() * static_cast<double>(hi - lo + 1));
  }

  // Zero-mean polynomial with u_hat(k) = amplitude * (c1 + i c2) / k^exponent,
  // c1, c2 ~ U(-1, 1), drawn in ascending k with re before im.
  TrigPoly random_decay_poly(int K, double amplitude, double exponent) {
    TrigPoly u(K);
    for (int k = 1; k <= K; ++k) {
      const double re = uniform(-1.0, 1.0);
      const double im = uniform(-1.0, 1.0);
      const double w = amplitude / std::pow(static_cast<double>(k), exponent);
      u.set_coeff(k, Complex{w * re, w * im});
    }
    return u;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace thinfilm
