#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thinfilm/sim_state.hpp"

namespace thinfilm {

// Which functionals to evaluate at every sample.  The zero/second/fourth
// order Wiener energies are always computed (they feed the decay and energy
// audits for both dissipation orders); Sobolev and sup orders are
// configurable.
struct DiagnosticsConfig {
  std::vector<int> sobolev_orders = {1, 2, 4};
  std::vector<int> sup_orders = {0};
  bool positivity = true;
  double envelope_tol = 0.01;     // relative slack for the decay envelope
  double energy_tol = 1e-3;       // additive slack for the energy audit
  double fit_skip_fraction = 0.05;  // leading fraction dropped by rate fits
};

struct DiagnosticsSample {
  double t = 0.0;
  double mass_f = 0.0;  // zero mode of fbar; exactly 0 for a conservative step
  double mass_g = 0.0;
  double e_wiener_0 = 0.0;  // |fbar|_{A^s} + |gbar|_{A^s} at s = 0, 2, 4
  double e_wiener_2 = 0.0;
  double e_wiener_4 = 0.0;
  std::vector<double> e_sobolev;  // |fbar|_{H^s}^2 + |gbar|_{H^s}^2, per config order
  std::vector<double> e_sup;      // sup-norm sums per config order
  double min_f = 0.0;  // grid minimum of the reconstructed height fbar + mean_f
  double min_g = 0.0;
};

struct RunMetadata {
  std::string model;
  std::string scheme;
  double dt = 0.0;
  int K = 0;
  std::string constants;  // human-readable reduced constants
};

struct DiagnosticsSeries {
  RunMetadata meta;
  DiagnosticsConfig config;  // orders needed to interpret the vector fields
  std::vector<DiagnosticsSample> samples;
};

DiagnosticsSample sample(const SimState& s, const DiagnosticsConfig& cfg);

// Decay-envelope audit: e_wiener_0(t) <= e_wiener_0(0) * exp(-rate t) * (1+tol)
// at every sample.  worst_margin is the minimal slack (bound minus value);
// an identically zero trajectory passes with infinite margin.
struct EnvelopeAudit {
  bool pass = false;
  double worst_margin = 0.0;
  double worst_t = 0.0;
};
EnvelopeAudit audit_decay_envelope(const DiagnosticsSeries& series, double rate,
                                   double tol);

// Dissipation audit on interior samples via central differences:
//   d/dt e_wiener_0 + delta_A * e_wiener_4 + delta_b * e_wiener_2
//     <= tol * (1 + e_wiener_4).
// delta_A weights the fourth-order energy, delta_b the second-order one;
// callers pass (delta_A, delta_b), (0, delta_b), (epsilon, 0) or
// (0, epsilon) depending on the dissipation order of the model.
// worst_slack is the minimal value of bound minus left-hand side.
struct EnergyAudit {
  bool pass = false;
  double worst_slack = 0.0;
  double worst_t = 0.0;
  int checked = 0;  // number of interior samples audited
};
EnergyAudit audit_energy_inequality(const DiagnosticsSeries& series, double delta_A,
                                    double delta_b, double tol);

// Least-squares slope of log e_wiener_0 against t, negated, over the samples
// after skipping the leading skip_fraction of the horizon.  Requires at
// least 3 samples in the window and strictly positive e_wiener_0 on it
// (both violations throw).  residual is the root-mean-square deviation of
// the log data from the fitted line.
struct RateFit {
  double rate = 0.0;
  double residual = 0.0;
  int n_used = 0;
};
RateFit fit_decay_rate(const DiagnosticsSeries& series, double skip_fraction);

// Regularity-propagation audit: the order-s_half Sobolev energy stays below
// s_bound at every sample, and the running trapezoid integral of the
// order-s_full energy converges (the mean increment over the last quarter of
// the horizon does not exceed the mean increment over the first quarter).
// Both orders must be present in the series configuration.
struct SobolevAudit {
  bool pass = false;
  double sup_half = 0.0;       // observed sup of the order-s_half energy
  double integral_full = 0.0;  // trapezoid integral of the order-s_full energy
  bool integral_converging = false;
};
SobolevAudit audit_sobolev_propagation(const DiagnosticsSeries& series, int s_half,
                                       int s_full, double s_bound);

// Grid minima of the reconstructed heights; ok iff both stay positive.
struct PositivityResult {
  double min_f = 0.0;
  double min_g = 0.0;
  bool ok = false;
};
PositivityResult check_positivity(const SimState& s);

// One row per sample: t, mass_f, mass_g, E_wiener_0, E_wiener_2, E_wiener_4,
// E_sob_<s> (configured order), E_sup_<n> (configured order), min_f, min_g.
// Numbers print with %.17g so a rerun under the same configuration is
// byte-identical.
void write_csv(const DiagnosticsSeries& series, std::ostream& out);

}  // namespace thinfilm
