#include "thinfilm/presets.hpp"

#include <stdexcept>
#include <utility>

#include "thinfilm/rng.hpp"

namespace thinfilm {

TrigPoly build_component(const InitialComponent& ic, int K, HermitianMode mode) {
  if (K < 1) throw std::invalid_argument("initial data: bandwidth must be >= 1");
  if (ic.preset == "zero") return TrigPoly(K);
  if (ic.preset == "single_mode") {
    if (ic.k < 1 || ic.k > K)
      throw std::invalid_argument("initial data: single_mode wavenumber " +
                                  std::to_string(ic.k) + " outside 1.." +
                                  std::to_string(K));
    return project(TrigPoly::cosine(ic.k, ic.amplitude), K);
  }
  if (ic.preset == "even_cosine") {
    if (static_cast<int>(ic.cosines.size()) > K)
      throw std::invalid_argument("initial data: more cosine amplitudes than modes");
    TrigPoly u(K);
    for (std::size_t j = 0; j < ic.cosines.size(); ++j) {
      u.set_coeff(static_cast<int>(j) + 1, Complex{0.5 * ic.cosines[j], 0.0});
    }
    return u;
  }
  if (ic.preset == "random_decay") {
    Rng rng(ic.seed);
    return rng.random_decay_poly(K, ic.amplitude, ic.exponent);
  }
  if (ic.preset == "coeffs") {
    std::vector<std::pair<int, Complex>> entries;
    entries.reserve(ic.coeffs.size());
    for (const auto& [k, re, im] : ic.coeffs) {
      if (k < -K || k > K)
        throw std::invalid_argument("initial data: coefficient wavenumber " +
                                    std::to_string(k) + " outside the bandwidth");
      entries.emplace_back(k, Complex{re, im});
    }
    return TrigPoly::from_two_sided(K, entries, mode);
  }
  throw std::invalid_argument("initial data: unknown preset '" + ic.preset + "'");
}

}  // namespace thinfilm
