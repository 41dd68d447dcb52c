#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thinfilm/diagnostics.hpp"
#include "thinfilm/linalg2.hpp"
#include "thinfilm/model_kind.hpp"
#include "thinfilm/muskat.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/stokes.hpp"
#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

enum class StepperScheme { imex_cn_ab2, imex_be, rk4_explicit };

inline std::string to_string(StepperScheme s) {
  switch (s) {
    case StepperScheme::imex_cn_ab2: return "imex_cn_ab2";
    case StepperScheme::imex_be: return "imex_be";
    case StepperScheme::rk4_explicit: return "rk4_explicit";
  }
  return "unknown";
}

inline StepperScheme scheme_from_string(const std::string& s) {
  if (s == "imex_cn_ab2") return StepperScheme::imex_cn_ab2;
  if (s == "imex_be") return StepperScheme::imex_be;
  if (s == "rk4_explicit") return StepperScheme::rk4_explicit;
  throw std::invalid_argument("unknown stepper scheme: " + s);
}

struct StepperConfig {
  double dt = 1e-4;
  StepperScheme scheme = StepperScheme::imex_cn_ab2;
  int K = 32;
  double t_end = 1.0;
  int sample_every = 1;
  bool linear_only = false;  // drop the nonlinearity (exact linear integrator tests)

  void validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("stepper: dt must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("stepper: t_end must be >= 0");
    if (K < 1) throw std::invalid_argument("stepper: K must be >= 1");
    if (sample_every < 1) throw std::invalid_argument("stepper: sample_every must be >= 1");
  }
};

// Right-hand side of a spectral evolution: a constant-coefficient 2x2 block
// per wavenumber (treated implicitly) plus an explicit nonlinearity.  The
// linear symbol depends on the interface means, which are fixed along a
// trajectory because the zero mode never moves.
class ModelRhs {
 public:
  virtual ~ModelRhs() = default;
  virtual Mat2 linear_symbol(int k) const = 0;
  virtual std::pair<TrigPoly, TrigPoly> nonlinear(const SimState& s) const = 0;
  virtual std::pair<double, double> means() const = 0;
  virtual std::string model_name() const = 0;
  virtual std::string describe() const = 0;  // reduced constants, human readable
};

class MuskatRhs final : public ModelRhs {
 public:
  MuskatRhs(const MuskatConstants& c, double mean_f, double mean_g,
            N2bLeading n2b = N2bLeading::gbar)
      : c_(c), mean_f_(mean_f), mean_g_(mean_g), n2b_(n2b) {}

  Mat2 linear_symbol(int k) const override {
    return thinfilm::linear_symbol(k, c_, mean_f_, mean_g_);
  }
  std::pair<TrigPoly, TrigPoly> nonlinear(const SimState& s) const override {
    return nonlinear_rhs(s, c_, n2b_);
  }
  std::pair<double, double> means() const override { return {mean_f_, mean_g_}; }
  std::string model_name() const override {
    return to_string(c_.variant == MuskatVariant::capillary ? ModelKind::muskat_capillary
                                                            : ModelKind::muskat_gravity);
  }
  std::string describe() const override;

  const MuskatConstants& constants() const { return c_; }

 private:
  MuskatConstants c_;
  double mean_f_, mean_g_;
  N2bLeading n2b_;
};

class StokesRhs final : public ModelRhs {
 public:
  StokesRhs(const StokesConstants& c, double mean_f, double mean_g)
      : c_(c), C_(coeff_matrix(c, mean_f, mean_g)), mean_f_(mean_f), mean_g_(mean_g) {}

  Mat2 linear_symbol(int k) const override {
    return thinfilm::linear_symbol(k, C_, c_.zeta);
  }
  std::pair<TrigPoly, TrigPoly> nonlinear(const SimState& s) const override {
    return nonlinear_rhs(s, c_);
  }
  std::pair<double, double> means() const override { return {mean_f_, mean_g_}; }
  std::string model_name() const override {
    return to_string(c_.zeta == 3 ? ModelKind::stokes_capillary
                                  : ModelKind::stokes_gravity);
  }
  std::string describe() const override;

  const StokesConstants& constants() const { return c_; }

 private:
  StokesConstants c_;
  StokesCoeffMatrix C_;
  double mean_f_, mean_g_;
};

// Raised when a step produces a non-finite coefficient.
struct NumericalFailure : std::runtime_error {
  NumericalFailure(double t_, long long step_);
  double t;
  long long step;
};

// Per-mode linear solves for the implicit schemes.  With a = dt (backward
// Euler) or dt/2 (trapezoidal), mode k stores
//   forward       = I - a L(k)
//   inverse       = forward^{-1}
//   explicit_part = I (backward Euler) or I + a L(k) (trapezoidal)
//   advance       = inverse * explicit_part   (the pure linear one-step map)
// Modes whose forward matrix has Frobenius condition estimate above 1e12 are
// listed in ill_conditioned and are solved by partial pivoting at every step
// instead of by the precomputed inverse; such a mode signals hypothesis
// violation or a misconfigured dt.
struct Propagators {
  StepperScheme scheme = StepperScheme::imex_be;
  double dt = 0.0;
  std::vector<Mat2> forward;
  std::vector<Mat2> inverse;
  std::vector<Mat2> explicit_part;
  std::vector<Mat2> advance;
  std::vector<char> use_pivot;
  std::vector<int> ill_conditioned;
};

// L[k] is the symbol at wavenumber k, k = 0..K.  Throws for the explicit
// scheme (nothing to precompute).
Propagators precompute_propagators(const std::vector<Mat2>& L, double dt,
                                   StepperScheme scheme);

// One trajectory's stepping engine.  Holds the precomputed propagators and
// the two-step history of the default scheme; the first step after
// construction (or reset_history) bootstraps with an explicit Euler
// treatment of the nonlinearity, subsequent steps use the two-step
// extrapolation.
class Stepper {
 public:
  Stepper(const StepperConfig& cfg, const ModelRhs& rhs);

  // Advance by one dt.  The zero mode is never touched (exact mass
  // conservation); every produced coefficient is checked finite.
  SimState step(const SimState& s);

  void reset_history();

  const Propagators& propagators() const { return props_; }

  // dt * |N|_{A^0} / |state|_{A^0} of the most recent step with a nonzero
  // state; large values (> 0.1) signal an under-resolved nonlinearity.
  double last_nonlinear_ratio() const { return last_ratio_; }

 private:
  std::pair<TrigPoly, TrigPoly> eval_nonlinear(const SimState& s);
  SimState apply_imex(const SimState& s, const TrigPoly& inc_f, const TrigPoly& inc_g) const;
  SimState rk4(const SimState& s) const;
  void check_finite(const SimState& s, double t_next) const;

  StepperConfig cfg_;
  const ModelRhs& rhs_;
  Propagators props_;
  bool have_prev_ = false;
  TrigPoly prev_nf_, prev_ng_;
  long long steps_taken_ = 0;
  double last_ratio_ = 0.0;
};

struct IntegrateResult {
  SimState state;
  DiagnosticsSeries series;
};

// Drive a full trajectory: n = round(t_end/dt) steps from s0, sampling at
// step 0, every sample_every-th step, and always at the final step.  The
// initial state is projected to cfg.K if its bandwidth differs; its means
// must match the model's.  warn (may be null) receives one message per run
// at most, the first time the nonlinear increment ratio exceeds 0.1;
// observer (may be null) sees every sampled state.
IntegrateResult integrate(const SimState& s0, const StepperConfig& cfg,
                          const ModelRhs& rhs, const DiagnosticsConfig& diag = {},
                          const std::function<void(const std::string&)>& warn = {},
                          const std::function<void(const SimState&, long long)>& observer = {});

}  // namespace thinfilm
