#pragma once

#include <utility>

#include "thinfilm/linalg2.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

enum class StokesDrive {
  capillary,  // surface-tension driven, dispersal operator -d^3/dx^3 (zeta = 3)
  gravity,    // gravity driven, dispersal operator d/dx (zeta = 1)
};

struct StokesPhysicalParams {
  double mu_minus = 1.0;
  double mu_plus = 1.0;
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double gamma_f = 0.0;
  double gamma_h = 0.0;
  double G = 1.0;
  StokesDrive drive = StokesDrive::capillary;
};

// Reduced constants: rho = (P+Q)/Q and mu = mu_minus/mu_plus, where (P, Q)
// are the drive strengths of the two interfaces; zeta records the
// derivative order of the drive (1 gravity, 3 capillary).
struct StokesConstants {
  double rho = 0.0;
  double mu = 0.0;
  int zeta = 3;
};

// The four positive coefficients of the constant linear block:
//   c11 = 2 rho F^3 + 3 F^2 G       c12 = 2 F^3 + 3 F^2 G
//   c21 = 2 mu G^3 + 3 rho F^2 G + 6 F G^2
//   c22 = 2 mu G^3 + 3 F^2 G + 6 F G^2
// with F = mean_f, G = mean_g.
struct StokesCoeffMatrix {
  double c11 = 0.0, c12 = 0.0, c21 = 0.0, c22 = 0.0;
};

// capillary: P = gamma_f/(6 mu_minus), Q = gamma_h/(6 mu_minus);
// gravity:   P = G(rho_minus - rho_plus)/(6 mu_minus), Q = G rho_plus/(6 mu_minus).
// Rejects gravity with rho_minus <= rho_plus (P <= 0) and capillary with
// gamma_h = 0.
StokesConstants reduce_params(const StokesPhysicalParams& p);

StokesCoeffMatrix coeff_matrix(const StokesConstants& c, double mean_f, double mean_g);

// L(k) = -k^{zeta+1} * C (the symbol of d/dx followed by the drive operator
// is -k^2 for zeta = 1 and -k^4 for zeta = 3).
Mat2 linear_symbol(int k, const StokesCoeffMatrix& C, int zeta);

// Cubic/quadratic split-form nonlinearity.  With D the drive operator and
// F, G the means, the four brackets are polynomial prefactors times D fbar
// or D gbar; prefactors share the monomials fbar^2, fbar gbar, gbar^2,
// fbar^3, gbar^3, fbar^2 gbar, gbar^2 fbar, which are computed once at full
// intermediate bandwidth (3K) so the projected result is the exact Galerkin
// image.  Outputs are exactly zero-mean.
std::pair<TrigPoly, TrigPoly> nonlinear_rhs(const SimState& s, const StokesConstants& c);

std::pair<TrigPoly, TrigPoly> full_rhs(const SimState& s, const StokesConstants& c);

// Reference assembly of the unsplit equations on the total heights:
//   df/dt = d/dx[ (2 rho f^3 + 3 f^2 g) D f + (2 f^3 + 3 f^2 g) D g ]
//   dg/dt = d/dx[ (2 mu g^3 + 3 rho f^2 g + 6 f g^2) D f
//                 + (2 mu g^3 + 3 f^2 g + 6 f g^2) D g ]
// used by the equivalence suites.
std::pair<TrigPoly, TrigPoly> unsplit_rhs(const SimState& s, const StokesConstants& c);

}  // namespace thinfilm
