#include "thinfilm/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace thinfilm {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on commas and/or whitespace; no empty tokens.
std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double parse_double(const std::string& v, const std::string& key, int line) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    fail(line, "key '" + key + "': '" + v + "' is not a number");
  return x;
}

long long parse_ll(const std::string& v, const std::string& key, int line) {
  errno = 0;
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE)
    fail(line, "key '" + key + "': '" + v + "' is not an integer");
  return x;
}

int parse_int(const std::string& v, const std::string& key, int line) {
  return static_cast<int>(parse_ll(v, key, line));
}

std::uint64_t parse_u64(const std::string& v, const std::string& key, int line) {
  const long long x = parse_ll(v, key, line);
  if (x < 0) fail(line, "key '" + key + "' must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(line, "key '" + key + "' must be 'true' or 'false', got '" + v + "'");
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key,
                                      int line) {
  std::vector<double> out;
  for (const std::string& tok : split_list(v)) out.push_back(parse_double(tok, key, line));
  return out;
}

std::vector<int> parse_int_list(const std::string& v, const std::string& key, int line) {
  std::vector<int> out;
  for (const std::string& tok : split_list(v)) out.push_back(parse_int(tok, key, line));
  return out;
}

// Entries of the form k:re:im (im optional, defaulting to 0).
std::vector<std::tuple<int, double, double>> parse_coeff_entries(const std::string& v,
                                                                 const std::string& key,
                                                                 int line) {
  std::vector<std::tuple<int, double, double>> out;
  for (const std::string& tok : split_list(v)) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : tok) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    parts.push_back(cur);
    if (parts.size() != 2 && parts.size() != 3)
      fail(line, "key '" + key + "': entry '" + tok + "' is not k:re[:im]");
    const int k = parse_int(parts[0], key, line);
    const double re = parse_double(parts[1], key, line);
    const double im = parts.size() == 3 ? parse_double(parts[2], key, line) : 0.0;
    out.emplace_back(k, re, im);
  }
  return out;
}

bool gate_token_valid(const std::string& g) {
  return g == "thm1" || g == "thm2" || g == "thm3" || g == "thm4" || g == "thm5" ||
         g == "thm6";
}

bool gate_applies(const std::string& g, ModelKind k) {
  if (g == "thm1" || g == "thm3") return k == ModelKind::muskat_capillary;
  if (g == "thm2" || g == "thm4") return k == ModelKind::muskat_gravity;
  return is_stokes(k);
}

// Handles one component's key inside [initial]; returns false if the key
// does not belong to the component with this prefix.
bool handle_component_key(InitialComponent& c, const std::string& prefix,
                          const std::string& key, const std::string& value, int line) {
  if (key == prefix + "_preset") {
    c.preset = value;
  } else if (key == prefix + "_amplitude") {
    c.amplitude = parse_double(value, key, line);
  } else if (key == prefix + "_k") {
    c.k = parse_int(value, key, line);
  } else if (key == prefix + "_seed") {
    c.seed = parse_u64(value, key, line);
  } else if (key == prefix + "_exponent") {
    c.exponent = parse_double(value, key, line);
  } else if (key == prefix + "_cosines") {
    c.cosines = parse_double_list(value, key, line);
  } else if (key == prefix + "_coeffs") {
    c.coeffs = parse_coeff_entries(value, key, line);
  } else {
    return false;
  }
  return true;
}

}  // namespace

MuskatConstants ModelConfig::muskat_constants() const {
  if (!is_muskat(kind))
    throw ConfigError("model kind " + to_string(kind) + " has no porous-medium constants");
  MuskatPhysicalParams p;
  p.mu_minus = mu_minus;
  p.mu_plus = mu_plus;
  p.rho_minus = rho_minus;
  p.rho_plus = rho_plus;
  p.gamma_f = gamma_f;
  p.gamma_h = gamma_h;
  p.G = gravity;
  const MuskatVariant variant = kind == ModelKind::muskat_capillary
                                    ? MuskatVariant::capillary
                                    : MuskatVariant::gravity;
  try {
    return reduce_params(p, variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[model] parameters: ") + e.what());
  }
}

StokesConstants ModelConfig::stokes_constants() const {
  if (!is_stokes(kind))
    throw ConfigError("model kind " + to_string(kind) + " has no bilayer constants");
  StokesPhysicalParams p;
  p.mu_minus = mu_minus;
  p.mu_plus = mu_plus;
  p.rho_minus = rho_minus;
  p.rho_plus = rho_plus;
  p.gamma_f = gamma_f;
  p.gamma_h = gamma_h;
  p.G = gravity;
  p.drive = kind == ModelKind::stokes_capillary ? StokesDrive::capillary
                                                : StokesDrive::gravity;
  try {
    return reduce_params(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[model] parameters: ") + e.what());
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  bool have_kind = false;
  bool have_n2b = false;
  std::set<std::string> seen;
  // Sweep axes arrive as independent keys; collect then pair up.
  std::vector<std::string> axis_keys(4);
  std::vector<std::vector<double>> axis_values(4);
  std::vector<bool> axis_key_set(4, false), axis_values_set(4, false);

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "model" && section != "initial" && section != "stepper" &&
          section != "diagnostics" && section != "certificates" &&
          section != "output" && section != "sweep")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(line, "empty key");
    if (section.empty()) fail(line, "key '" + key + "' outside any section");
    if (!seen.insert(section + "/" + key).second)
      fail(line, "duplicate key '" + key + "' in [" + section + "]");

    if (section == "model") {
      if (key == "kind") {
        try {
          cfg.model.kind = model_kind_from_string(value);
        } catch (const std::invalid_argument& e) {
          fail(line, e.what());
        }
        have_kind = true;
      } else if (key == "mu_minus") {
        cfg.model.mu_minus = parse_double(value, key, line);
      } else if (key == "mu_plus") {
        cfg.model.mu_plus = parse_double(value, key, line);
      } else if (key == "rho_minus") {
        cfg.model.rho_minus = parse_double(value, key, line);
      } else if (key == "rho_plus") {
        cfg.model.rho_plus = parse_double(value, key, line);
      } else if (key == "gamma_f") {
        cfg.model.gamma_f = parse_double(value, key, line);
      } else if (key == "gamma_h") {
        cfg.model.gamma_h = parse_double(value, key, line);
      } else if (key == "gravity") {
        cfg.model.gravity = parse_double(value, key, line);
      } else if (key == "mean_f") {
        cfg.model.mean_f = parse_double(value, key, line);
      } else if (key == "mean_g") {
        cfg.model.mean_g = parse_double(value, key, line);
      } else if (key == "n2b_leading_factor") {
        if (value == "gbar") {
          cfg.model.n2b = N2bLeading::gbar;
        } else if (value == "fbar") {
          cfg.model.n2b = N2bLeading::fbar;
        } else {
          fail(line, "n2b_leading_factor must be 'gbar' or 'fbar'");
        }
        have_n2b = true;
      } else {
        fail(line, "unknown key '" + key + "' in [model]");
      }
    } else if (section == "initial") {
      if (key == "coeff_mode") {
        if (value == "strict") {
          cfg.initial.coeff_mode = HermitianMode::strict;
        } else if (value == "symmetrize") {
          cfg.initial.coeff_mode = HermitianMode::symmetrize;
        } else {
          fail(line, "coeff_mode must be 'strict' or 'symmetrize'");
        }
      } else if (handle_component_key(cfg.initial.f, "f", key, value, line) ||
                 handle_component_key(cfg.initial.g, "g", key, value, line)) {
        // handled
      } else {
        fail(line, "unknown key '" + key + "' in [initial]");
      }
    } else if (section == "stepper") {
      if (key == "scheme") {
        try {
          cfg.stepper.scheme = scheme_from_string(value);
        } catch (const std::invalid_argument& e) {
          fail(line, e.what());
        }
      } else if (key == "dt") {
        cfg.stepper.dt = parse_double(value, key, line);
      } else if (key == "t_end") {
        cfg.stepper.t_end = parse_double(value, key, line);
      } else if (key == "K") {
        cfg.stepper.K = parse_int(value, key, line);
      } else if (key == "sample_every") {
        cfg.stepper.sample_every = parse_int(value, key, line);
      } else if (key == "linear_only") {
        cfg.stepper.linear_only = parse_bool(value, key, line);
      } else {
        fail(line, "unknown key '" + key + "' in [stepper]");
      }
    } else if (section == "diagnostics") {
      if (key == "sobolev_orders") {
        cfg.diagnostics.sobolev_orders = parse_int_list(value, key, line);
      } else if (key == "sup_orders") {
        cfg.diagnostics.sup_orders = parse_int_list(value, key, line);
      } else if (key == "positivity") {
        cfg.diagnostics.positivity = parse_bool(value, key, line);
      } else if (key == "envelope_tol") {
        cfg.diagnostics.envelope_tol = parse_double(value, key, line);
      } else if (key == "energy_tol") {
        cfg.diagnostics.energy_tol = parse_double(value, key, line);
      } else if (key == "fit_skip_fraction") {
        cfg.diagnostics.fit_skip_fraction = parse_double(value, key, line);
      } else {
        fail(line, "unknown key '" + key + "' in [diagnostics]");
      }
    } else if (section == "certificates") {
      if (key == "gates") {
        cfg.certificates.gates = split_list(value);
        for (const std::string& g : cfg.certificates.gates)
          if (!gate_token_valid(g)) fail(line, "unknown gate '" + g + "'");
      } else {
        fail(line, "unknown key '" + key + "' in [certificates]");
      }
    } else if (section == "output") {
      if (key == "csv") {
        cfg.output.csv = value;
      } else if (key == "report") {
        cfg.output.report = value;
      } else if (key == "plot_script") {
        cfg.output.plot_script = value;
      } else {
        fail(line, "unknown key '" + key + "' in [output]");
      }
    } else if (section == "sweep") {
      if (key == "run") {
        cfg.sweep.run = parse_bool(value, key, line);
      } else if (key.rfind("axis_", 0) == 0 || key.rfind("values_", 0) == 0) {
        const bool is_axis = key.rfind("axis_", 0) == 0;
        const std::string idx_str = key.substr(is_axis ? 5 : 7);
        int idx = 0;
        try {
          idx = std::stoi(idx_str);
        } catch (...) {
          fail(line, "unknown key '" + key + "' in [sweep]");
        }
        if (idx < 1 || idx > 4) fail(line, "sweep axis index must be 1..4");
        if (is_axis) {
          axis_keys[static_cast<std::size_t>(idx - 1)] = value;
          axis_key_set[static_cast<std::size_t>(idx - 1)] = true;
        } else {
          axis_values[static_cast<std::size_t>(idx - 1)] =
              parse_double_list(value, key, line);
          axis_values_set[static_cast<std::size_t>(idx - 1)] = true;
        }
      } else {
        fail(line, "unknown key '" + key + "' in [sweep]");
      }
    }
  }

  if (!have_kind) throw ConfigError("config: [model] kind is required");
  if (have_n2b && !is_muskat(cfg.model.kind))
    throw ConfigError("config: n2b_leading_factor applies only to porous-medium kinds");

  for (std::size_t i = 0; i < 4; ++i) {
    if (axis_key_set[i] != axis_values_set[i])
      throw ConfigError("config: sweep axis_" + std::to_string(i + 1) + " and values_" +
                        std::to_string(i + 1) + " must be given together");
    if (axis_key_set[i]) {
      if (axis_values[i].empty())
        throw ConfigError("config: sweep values_" + std::to_string(i + 1) + " is empty");
      cfg.sweep.axes.push_back({axis_keys[i], axis_values[i]});
    }
  }

  if (cfg.certificates.gates.empty()) {
    switch (cfg.model.kind) {
      case ModelKind::muskat_capillary: cfg.certificates.gates = {"thm1"}; break;
      case ModelKind::muskat_gravity: cfg.certificates.gates = {"thm2"}; break;
      case ModelKind::stokes_capillary:
      case ModelKind::stokes_gravity: cfg.certificates.gates = {"thm5"}; break;
    }
  }
  for (const std::string& g : cfg.certificates.gates) {
    if (!gate_applies(g, cfg.model.kind))
      throw ConfigError("config: gate " + g + " does not apply to model kind " +
                        to_string(cfg.model.kind));
  }

  try {
    cfg.stepper.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!(cfg.model.mean_f > 0.0) || !(cfg.model.mean_g > 0.0))
    throw ConfigError("config: layer means must be positive");
  if (cfg.diagnostics.envelope_tol < 0.0 || cfg.diagnostics.energy_tol < 0.0)
    throw ConfigError("config: diagnostic tolerances must be nonnegative");
  if (cfg.diagnostics.fit_skip_fraction < 0.0 || cfg.diagnostics.fit_skip_fraction >= 1.0)
    throw ConfigError("config: fit_skip_fraction must lie in [0, 1)");
  for (int order : cfg.diagnostics.sobolev_orders)
    if (order < 0) throw ConfigError("config: sobolev_orders must be nonnegative");
  for (int order : cfg.diagnostics.sup_orders)
    if (order < 0) throw ConfigError("config: sup_orders must be nonnegative");

  // Reducing the constants validates the raw physical parameters.
  if (is_muskat(cfg.model.kind)) {
    (void)cfg.model.muskat_constants();
  } else {
    (void)cfg.model.stokes_constants();
  }

  for (const SweepAxis& ax : cfg.sweep.axes) {
    RunConfig probe = cfg;
    apply_sweep_value(probe, ax.key, ax.values.front());  // key validity check
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_sweep_value(RunConfig& cfg, const std::string& key, double value) {
  if (key == "model.mu_minus") {
    cfg.model.mu_minus = value;
  } else if (key == "model.mu_plus") {
    cfg.model.mu_plus = value;
  } else if (key == "model.rho_minus") {
    cfg.model.rho_minus = value;
  } else if (key == "model.rho_plus") {
    cfg.model.rho_plus = value;
  } else if (key == "model.gamma_f") {
    cfg.model.gamma_f = value;
  } else if (key == "model.gamma_h") {
    cfg.model.gamma_h = value;
  } else if (key == "model.gravity") {
    cfg.model.gravity = value;
  } else if (key == "model.mean_f") {
    cfg.model.mean_f = value;
  } else if (key == "model.mean_g") {
    cfg.model.mean_g = value;
  } else if (key == "initial.f_amplitude") {
    cfg.initial.f.amplitude = value;
  } else if (key == "initial.g_amplitude") {
    cfg.initial.g.amplitude = value;
  } else if (key == "initial.f_exponent") {
    cfg.initial.f.exponent = value;
  } else if (key == "initial.g_exponent") {
    cfg.initial.g.exponent = value;
  } else if (key == "stepper.dt") {
    cfg.stepper.dt = value;
  } else if (key == "stepper.t_end") {
    cfg.stepper.t_end = value;
  } else {
    throw ConfigError("sweep: unknown parameter '" + key + "'");
  }
}

SimState build_initial_state(const RunConfig& cfg) {
  SimState s;
  try {
    s.fbar = build_component(cfg.initial.f, cfg.stepper.K, cfg.initial.coeff_mode);
    s.gbar = build_component(cfg.initial.g, cfg.stepper.K, cfg.initial.coeff_mode);
    s.mean_f = cfg.model.mean_f;
    s.mean_g = cfg.model.mean_g;
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  }
  return s;
}

std::unique_ptr<ModelRhs> build_rhs(const RunConfig& cfg) {
  if (is_muskat(cfg.model.kind)) {
    return std::make_unique<MuskatRhs>(cfg.model.muskat_constants(), cfg.model.mean_f,
                                       cfg.model.mean_g, cfg.model.n2b);
  }
  return std::make_unique<StokesRhs>(cfg.model.stokes_constants(), cfg.model.mean_f,
                                     cfg.model.mean_g);
}

}  // namespace thinfilm
