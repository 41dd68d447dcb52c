#pragma once

#include <stdexcept>

#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Zero-mean perturbation pair plus the (constant-in-time) layer means.
// fbar/gbar are the fluctuations of the two interface heights around their
// initial means; the means enter the dynamics only through the constant
// coefficients of the evolution operators.
struct SimState {
  TrigPoly fbar;
  TrigPoly gbar;
  double mean_f = 0.0;
  double mean_g = 0.0;
  double t = 0.0;

  // Throws std::invalid_argument unless both components are zero-mean with
  // a shared bandwidth and both means are strictly positive.
  void validate() const {
    if (!fbar.is_zero_mean() || !gbar.is_zero_mean()) {
      throw std::invalid_argument("SimState: perturbations must be zero-mean");
    }
    if (fbar.K() != gbar.K()) {
      throw std::invalid_argument("SimState: components must share one bandwidth");
    }
    if (!(mean_f > 0.0) || !(mean_g > 0.0)) {
      throw std::invalid_argument("SimState: layer means must be positive");
    }
  }

  int K() const { return fbar.K(); }
};

}  // namespace thinfilm
