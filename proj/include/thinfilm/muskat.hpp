#pragma once

#include <utility>

#include "thinfilm/linalg2.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Raw fluid parameters of the two-layer porous-medium problem.
struct MuskatPhysicalParams {
  double mu_minus = 1.0;   // lower-layer viscosity
  double mu_plus = 1.0;    // upper-layer viscosity
  double rho_minus = 1.0;  // lower-layer density
  double rho_plus = 1.0;   // upper-layer density
  double gamma_f = 0.0;    // fluid-fluid surface tension
  double gamma_h = 0.0;    // fluid-air surface tension
  double G = 1.0;          // gravitational acceleration
};

enum class MuskatVariant {
  capillary,  // fourth-order, surface-tension driven
  gravity,    // second-order, gravity driven (A-block identically zero)
};

// Reduced coefficient set after nondimensionalization: the second-order
// (b) block and the fourth-order (A) block.
struct MuskatConstants {
  double b = 0.0;
  double b_mu = 0.0;
  double b_rho = 0.0;
  double A = 0.0;
  double A_mu = 0.0;
  double A_gamma = 0.0;
  MuskatVariant variant = MuskatVariant::capillary;
};

// Which factor leads the second-order part of the second-component
// nonlinearity.  `gbar` is the form consistent with deriving the split
// system from the unsplit one (and is the default); `fbar` is an alternate
// truncation kept switchable for A/B comparison.
enum class N2bLeading { gbar, fbar };

// b = rho_plus, b_mu = (mu_minus/mu_plus) b, b_rho = (rho_minus/rho_plus) b;
// A = gamma_h/G, A_mu = (mu_minus/mu_plus) A,
// A_gamma = ((gamma_f+gamma_h)/gamma_h) A.  The gravity variant zeroes the
// A block and rejects nonzero surface tensions; the capillary variant
// requires gamma_h > 0.
MuskatConstants reduce_params(const MuskatPhysicalParams& p, MuskatVariant variant);

// Constant-coefficient block of the evolution operator at wavenumber k:
//   row 1 = -mean_f * [A_gamma k^4 + b_rho k^2,  A k^4 + b k^2]
//   row 2 = -mean_g * [A_mu k^4 + b_mu k^2,      A_mu k^4 + b_mu k^2]
Mat2 linear_symbol(int k, const MuskatConstants& c, double mean_f, double mean_g);

// Quadratic nonlinearity in split form, assembled as
//   N_f = d/dx P_K[ fbar * (b_rho fbar' + b gbar' - A_gamma fbar''' - A gbar''') ]
//   N_g = d/dx P_K[ gbar * (b_mu (fbar' + gbar') - A_mu (fbar''' + gbar''')) ]
// (N2bLeading::fbar swaps the leading factor of the second-order part of
// N_g to fbar).  Both outputs are exactly zero-mean.
std::pair<TrigPoly, TrigPoly> nonlinear_rhs(const SimState& s, const MuskatConstants& c,
                                            N2bLeading n2b = N2bLeading::gbar);

// linear + nonlinear parts applied to the fluctuation pair.
std::pair<TrigPoly, TrigPoly> full_rhs(const SimState& s, const MuskatConstants& c,
                                       N2bLeading n2b = N2bLeading::gbar);

// Reference assembly of the unsplit equations on the total heights
// f = fbar + mean_f, g = gbar + mean_g:
//   df/dt = -d/dx[ f (A_gamma f''' + A g''' - b_rho f' - b g') ]
//   dg/dt = -d/dx[ g (A_mu (f''' + g''') - b_mu (f' + g')) ]
// computed with full intermediate bandwidth and projected back to K.  Equals
// full_rhs up to rounding; used by the equivalence suites.
std::pair<TrigPoly, TrigPoly> unsplit_rhs(const SimState& s, const MuskatConstants& c);

}  // namespace thinfilm
