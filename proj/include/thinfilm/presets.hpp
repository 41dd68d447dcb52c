#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Recipe for one initial-data component.  Each preset uses the subset of
// fields listed beside it; the rest are ignored.
//   zero          —
//   single_mode   amplitude, k           amplitude * cos(k x)
//   even_cosine   cosines                sum_j cosines[j] * cos((j+1) x)
//   random_decay  amplitude, seed,       coefficients amplitude*(c1+i c2)/k^exponent,
//                 exponent               c1, c2 ~ U(-1,1) from the seeded source
//   coeffs        coeffs                 explicit (k, re, im) entries, either sign of k
struct InitialComponent {
  std::string preset = "zero";
  double amplitude = 0.0;
  int k = 1;
  std::uint64_t seed = 1;
  double exponent = 2.0;
  std::vector<double> cosines;
  std::vector<std::tuple<int, double, double>> coeffs;
};

// Realizes the recipe at bandwidth K.  `mode` governs how explicit
// two-sided coefficient lists are reconciled with real-valuedness; presets
// other than `coeffs` are Hermitian by construction.  Content beyond the
// bandwidth (single_mode k > K, more cosines than K, a coeffs entry with
// |k| > K) and unknown preset names are rejected.
TrigPoly build_component(const InitialComponent& ic, int K, HermitianMode mode);

}  // namespace thinfilm
