#pragma once

#include <optional>
#include <string>

#include "thinfilm/model_kind.hpp"
#include "thinfilm/muskat.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/stokes.hpp"

namespace thinfilm {

// The certificate engine evaluates, in exact closed form, every smallness
// hypothesis the decay theory attaches to an initial datum: given the
// reduced model constants, the interface means and the initial Wiener size
// e0, it reports the sigma/Sigma margins, the hypothesis gates (strict
// positivity, no tolerances), and the decay rate the passing gates predict
// for the zero-order Wiener norm.

enum class GateStatus { pass, fail, not_applicable };

inline std::string to_string(GateStatus g) {
  switch (g) {
    case GateStatus::pass: return "pass";
    case GateStatus::fail: return "fail";
    case GateStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

// The four sigma margins of the porous-medium system and their pair minima.
// For the gravity variant the fourth-order block is identically zero, so the
// A-pair is reported as not applicable (zeros, sigma_A_applicable = false)
// and only the b-pair gates.
struct MuskatSigmas {
  double sigma1_A = 0.0;
  double sigma2_A = 0.0;
  double sigma1_b = 0.0;
  double sigma2_b = 0.0;
  double delta_A = 0.0;
  double delta_b = 0.0;
  bool sigma_A_applicable = true;
};

struct MarginPair {
  double first = 0.0;
  double second = 0.0;
  double min() const { return first < second ? first : second; }
  bool positive() const { return first > 0.0 && second > 0.0; }
};

// Cubic margins of the viscous-bilayer system; epsilon = min(Sigma1, Sigma2)
// is the engine's explicit stand-in for the abstract decay rate (see the
// derivation note at stokes_Sigmas).
struct StokesSigmas {
  double Sigma1 = 0.0;
  double Sigma2 = 0.0;
  double epsilon = 0.0;
};

// Higher-regularity margins for the bilayer system: the mean-polynomial
// pair minus e0 times the order-dependent constant C_zeta.
struct StokesThm6 {
  MarginPair margins;
  double C_zeta = 0.0;
};

// Tri-state gate per hypothesis group:
//   thm1: porous-medium capillary base gates (smallness + all four sigmas)
//   thm2: porous-medium gravity base gates (smallness + b-pair)
//   thm3: capillary higher-regularity margins on top of thm1
//   thm4: gravity higher-regularity margins on top of thm2
//   thm5: bilayer base gates (smallness + Sigma pair)
//   thm6: bilayer higher-regularity margins on top of thm5
struct GateSet {
  GateStatus thm1 = GateStatus::not_applicable;
  GateStatus thm2 = GateStatus::not_applicable;
  GateStatus thm3 = GateStatus::not_applicable;
  GateStatus thm4 = GateStatus::not_applicable;
  GateStatus thm5 = GateStatus::not_applicable;
  GateStatus thm6 = GateStatus::not_applicable;
};

struct CertificateReport {
  ModelKind model = ModelKind::muskat_capillary;
  double e0 = 0.0;
  double mean_f = 0.0;
  double mean_g = 0.0;
  bool smallness_ok = false;  // e0 < min(mean_f, mean_g), strict

  std::optional<MuskatSigmas> sigma;           // porous-medium kinds
  std::optional<MarginPair> thm3_statement;    // capillary only
  std::optional<MarginPair> thm3_proof;        // alternate coefficient convention
  std::optional<MarginPair> thm4_lhs;          // gravity only
  std::optional<StokesSigmas> Sigma;           // bilayer kinds
  std::optional<StokesThm6> thm6;              // bilayer kinds

  GateSet gates;

  // Predicted exponential decay rate of the zero-order Wiener energy:
  // delta_A + delta_b (capillary porous medium), delta_b (gravity), or
  // epsilon (bilayer).  Meaningful when the base gate passes.
  double rate = 0.0;

  // Empirical fields, filled from a computed trajectory by the diagnostics
  // layer (least-squares fitted rates), never by evaluate().
  std::optional<double> fitted_delta1;
  std::optional<double> fitted_delta2;
  std::optional<double> fitted_c;
};

// sigma1_A = F A_gamma - G A_mu - (A_mu + 2 A_gamma + 2A) e0
// sigma2_A = G A_mu  - F A       - (A_mu + 2 A_gamma + 2A) e0
// sigma1_b = F b_rho - G b_mu    - (2 b_rho + 2b + 4 b_mu) e0
// sigma2_b = G b_mu  - F b       - (2 b_rho + 2b + 4 b_mu) e0
// with F = mean_f, G = mean_g; delta_A/delta_b are the pair minima.
// Negative values are valid outputs (the gates fail); e0 < 0 throws.
MuskatSigmas muskat_sigmas(const MuskatConstants& c, double mean_f, double mean_g,
                           double e0);

// Capillary higher-regularity margins.  Statement convention subtracts
// (A_gamma + (13/4)A + (17/4)A_mu) e0 from both
//   first  = G A_mu   - (F A + G A_mu)/2
//   second = F A_gamma - (F A + G A_mu)/2;
// the proof convention subtracts (sqrt2 A_gamma + (9/4)A + (sqrt2+9/4)A_mu) e0
// instead.  Both are returned (statement first); the statement pair is the
// canonical gate, the proof pair is informational.  Requires capillary
// constants.
std::pair<MarginPair, MarginPair> muskat_thm3_margins(const MuskatConstants& c,
                                                      double mean_f, double mean_g,
                                                      double e0);

// Gravity higher-regularity margins:
//   first  = F b_rho - (G b_mu + F b)/2 - (b_rho + b_mu + (5/2)(b_mu + b)) e0
//   second = G b_mu  - (G b_mu + F b)/2 - (same) e0.
// Requires gravity constants.
MarginPair muskat_thm4_margins(const MuskatConstants& c, double mean_f, double mean_g,
                               double e0);

// The two cubic bilayer margins.  At e0 = 0:
//   Sigma1 = 2 rho F^3 + 3 F^2 G (1 - rho) - (2 mu G^3 + 6 F G^2)
//   Sigma2 = 2 mu G^3 + 6 F G^2 - 2 F^3
// with nonnegative e0-correction brackets subtracted for e0 > 0.
// epsilon := min(Sigma1, Sigma2).  The decay theory only asserts existence
// of a small positive rate; this explicit choice is justified by
// d/dt e0 <= -Sigma1 |fbar|_{A^{zeta+1}} - Sigma2 |gbar|_{A^{zeta+1}}
// <= -min(Sigma1,Sigma2) e0, using that the (zeta+1)-order Wiener norm of a
// zero-mean function dominates the zero-order one.  Reported as a derived
// rate, not a stated one.
StokesSigmas stokes_Sigmas(const StokesConstants& c, double mean_f, double mean_g,
                           double e0);

// Bilayer higher-regularity margins:
//   first  = (2 rho - 1) F^3 - (3/2)(rho - 1) F^2 G - 3 F G^2 - mu G^3 - e0 C_zeta
//   second = mu G^3 + 3 F G^2 - (3/2)(rho - 1) F^2 G - F^3 - e0 C_zeta
// where C_zeta is the order-dependent quadratic form in (e0, F, G) for
// zeta = 1 or zeta = 3.  Requires zeta in {1, 3}.
StokesThm6 stokes_thm6_margins(const StokesConstants& c, double mean_f, double mean_g,
                               double e0);

// Full report for an initial state: e0 = |fbar|_{A^0} + |gbar|_{A^0},
// smallness, every applicable margin block, the gate set, and the predicted
// decay rate.  The state must be a valid SimState (zero-mean fluctuations,
// positive means).
CertificateReport evaluate(const SimState& initial, const MuskatConstants& c);
CertificateReport evaluate(const SimState& initial, const StokesConstants& c);

}  // namespace thinfilm
