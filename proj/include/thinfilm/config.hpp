#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "thinfilm/diagnostics.hpp"
#include "thinfilm/model_kind.hpp"
#include "thinfilm/muskat.hpp"
#include "thinfilm/presets.hpp"
#include "thinfilm/stepper.hpp"
#include "thinfilm/stokes.hpp"

namespace thinfilm {

// Any defect in user-supplied configuration: syntax, unknown keys, values
// out of range, physically inconsistent parameters.  The harness maps it to
// its configuration-error exit code.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  ModelKind kind = ModelKind::muskat_capillary;
  double mu_minus = 1.0;
  double mu_plus = 1.0;
  double rho_minus = 1.0;
  double rho_plus = 1.0;
  double gamma_f = 0.0;
  double gamma_h = 0.0;
  double gravity = 1.0;
  double mean_f = 1.0;
  double mean_g = 1.0;
  N2bLeading n2b = N2bLeading::gbar;

  // Reduced constants; throw ConfigError when the raw parameters are
  // inconsistent with the kind.
  MuskatConstants muskat_constants() const;
  StokesConstants stokes_constants() const;
};

struct InitialConfig {
  HermitianMode coeff_mode = HermitianMode::strict;
  InitialComponent f;
  InitialComponent g;
};

struct CertificatesConfig {
  // Gates that must pass for a run to proceed; defaulted from the model
  // kind (thm1 / thm2 / thm5) when the section does not set them.
  std::vector<std::string> gates;
};

struct OutputConfig {
  std::string csv = "diagnostics.csv";
  std::string report = "report.json";
  std::string plot_script = "plot.py";
};

struct SweepAxis {
  std::string key;  // dotted parameter name, e.g. "model.mean_g"
  std::vector<double> values;
};

struct SweepConfig {
  std::vector<SweepAxis> axes;  // points enumerate lexicographically
  bool run = false;             // false: certificates only; true: full trajectories
};

struct RunConfig {
  ModelConfig model;
  InitialConfig initial;
  StepperConfig stepper;
  DiagnosticsConfig diagnostics;
  CertificatesConfig certificates;
  OutputConfig output;
  SweepConfig sweep;
};

// Parses the INI-style text: [section] headers, key = value lines, blank
// lines, and full-line comments starting with '#' or ';'.  Unknown
// sections, unknown keys, duplicate keys, missing required keys, and
// malformed values all throw ConfigError with the line number.
RunConfig parse_config_text(const std::string& text);

// Reads the file and parses it; file-system failures throw ConfigError.
RunConfig load_config(const std::string& path);

// Applies one sweep assignment ("section.key") to a copy of the base
// configuration; unknown keys throw ConfigError.
void apply_sweep_value(RunConfig& cfg, const std::string& key, double value);

// Realizes the initial data at the stepper bandwidth.  Zero-mean and
// positivity requirements are enforced by SimState validation; violations
// surface as ConfigError.
SimState build_initial_state(const RunConfig& cfg);

// The model's right-hand side; allocates the matching concrete type.
std::unique_ptr<ModelRhs> build_rhs(const RunConfig& cfg);

}  // namespace thinfilm
