#include "thinfilm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "thinfilm/certificates.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/diagnostics.hpp"
#include "thinfilm/norms.hpp"
#include "thinfilm/stepper.hpp"
#include "thinfilm/verify_suites.hpp"

namespace thinfilm {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GateStatus gate_by_name(const GateSet& g, const std::string& n) {
  if (n == "thm1") return g.thm1;
  if (n == "thm2") return g.thm2;
  if (n == "thm3") return g.thm3;
  if (n == "thm4") return g.thm4;
  if (n == "thm5") return g.thm5;
  if (n == "thm6") return g.thm6;
  throw std::invalid_argument("unknown gate: " + n);
}

ordered_json gates_json(const GateSet& g) {
  ordered_json j;
  j["thm1"] = to_string(g.thm1);
  j["thm2"] = to_string(g.thm2);
  j["thm3"] = to_string(g.thm3);
  j["thm4"] = to_string(g.thm4);
  j["thm5"] = to_string(g.thm5);
  j["thm6"] = to_string(g.thm6);
  return j;
}

ordered_json certificates_json(const CertificateReport& r) {
  ordered_json j;
  j["model"] = to_string(r.model);
  j["e0"] = r.e0;
  j["mean_f"] = r.mean_f;
  j["mean_g"] = r.mean_g;
  j["smallness_ok"] = r.smallness_ok;
  if (r.sigma) {
    ordered_json s;
    s["sigma1_A"] = r.sigma->sigma1_A;
    s["sigma2_A"] = r.sigma->sigma2_A;
    s["sigma1_b"] = r.sigma->sigma1_b;
    s["sigma2_b"] = r.sigma->sigma2_b;
    s["delta_A"] = r.sigma->delta_A;
    s["delta_b"] = r.sigma->delta_b;
    s["sigma_A_applicable"] = r.sigma->sigma_A_applicable;
    j["sigma"] = std::move(s);
  }
  auto margin_json = [](const MarginPair& m) {
    ordered_json p;
    p["first"] = m.first;
    p["second"] = m.second;
    return p;
  };
  if (r.thm3_statement) j["thm3_statement"] = margin_json(*r.thm3_statement);
  if (r.thm3_proof) j["thm3_proof"] = margin_json(*r.thm3_proof);
  if (r.thm4_lhs) j["thm4_lhs"] = margin_json(*r.thm4_lhs);
  if (r.Sigma) {
    ordered_json s;
    s["Sigma1"] = r.Sigma->Sigma1;
    s["Sigma2"] = r.Sigma->Sigma2;
    s["epsilon"] = r.Sigma->epsilon;
    j["Sigma"] = std::move(s);
  }
  if (r.thm6) {
    ordered_json s;
    s["first"] = r.thm6->margins.first;
    s["second"] = r.thm6->margins.second;
    s["C_zeta"] = r.thm6->C_zeta;
    j["thm6"] = std::move(s);
  }
  j["gates"] = gates_json(r.gates);
  j["rate"] = r.rate;
  return j;
}

struct Setup {
  RunConfig cfg;
  SimState initial;
  std::unique_ptr<ModelRhs> rhs;
  CertificateReport certificates;
  std::vector<std::string> failed_gates;
  bool gates_pass = false;
};

CertificateReport evaluate_certificates(const RunConfig& cfg, const SimState& s) {
  if (is_muskat(cfg.model.kind)) return evaluate(s, cfg.model.muskat_constants());
  return evaluate(s, cfg.model.stokes_constants());
}

Setup make_setup(const std::string& config_path, std::optional<std::uint64_t> seed) {
  Setup su;
  su.cfg = load_config(config_path);
  if (seed) {
    su.cfg.initial.f.seed = *seed;
    su.cfg.initial.g.seed = *seed ^ 0x9e3779b97f4a7c15ull;
  }
  su.initial = build_initial_state(su.cfg);
  su.rhs = build_rhs(su.cfg);
  su.certificates = evaluate_certificates(su.cfg, su.initial);
  su.gates_pass = true;
  for (const std::string& g : su.cfg.certificates.gates) {
    if (gate_by_name(su.certificates.gates, g) != GateStatus::pass) {
      su.gates_pass = false;
      su.failed_gates.push_back(g);
    }
  }
  return su;
}

void print_certificates(std::ostream& out, const Setup& su) {
  const CertificateReport& r = su.certificates;
  out << "model " << to_string(r.model) << ": " << su.rhs->describe() << "\n";
  out << "initial e0 = " << fmt_g(r.e0) << " (means " << fmt_g(r.mean_f) << ", "
      << fmt_g(r.mean_g) << "): smallness " << (r.smallness_ok ? "ok" : "VIOLATED")
      << "\n";
  if (r.sigma) {
    if (r.sigma->sigma_A_applicable) {
      out << "sigma margins: sigma1_A=" << fmt_g(r.sigma->sigma1_A)
          << " sigma2_A=" << fmt_g(r.sigma->sigma2_A);
    } else {
      out << "sigma margins:";
    }
    out << " sigma1_b=" << fmt_g(r.sigma->sigma1_b)
        << " sigma2_b=" << fmt_g(r.sigma->sigma2_b) << "\n";
    out << "decay weights: delta_A=" << fmt_g(r.sigma->delta_A)
        << " delta_b=" << fmt_g(r.sigma->delta_b) << "\n";
  }
  if (r.thm3_statement) {
    out << "higher-regularity margins: first=" << fmt_g(r.thm3_statement->first)
        << " second=" << fmt_g(r.thm3_statement->second) << "\n";
  }
  if (r.thm4_lhs) {
    out << "higher-regularity margins: first=" << fmt_g(r.thm4_lhs->first)
        << " second=" << fmt_g(r.thm4_lhs->second) << "\n";
  }
  if (r.Sigma) {
    out << "Sigma margins: Sigma1=" << fmt_g(r.Sigma->Sigma1)
        << " Sigma2=" << fmt_g(r.Sigma->Sigma2)
        << " epsilon=" << fmt_g(r.Sigma->epsilon) << "\n";
  }
  if (r.thm6) {
    out << "higher-regularity margins: first=" << fmt_g(r.thm6->margins.first)
        << " second=" << fmt_g(r.thm6->margins.second) << "\n";
  }
  auto print_gate = [&](const std::string& name, GateStatus st) {
    if (st != GateStatus::not_applicable) {
      out << "gate " << name << ": " << to_string(st) << "\n";
    }
  };
  print_gate("thm1", r.gates.thm1);
  print_gate("thm2", r.gates.thm2);
  print_gate("thm3", r.gates.thm3);
  print_gate("thm4", r.gates.thm4);
  print_gate("thm5", r.gates.thm5);
  print_gate("thm6", r.gates.thm6);
  out << "certified decay rate: " << fmt_g(r.rate) << "\n";
  out << "required gates [";
  for (std::size_t i = 0; i < su.cfg.certificates.gates.size(); ++i) {
    if (i) out << ", ";
    out << su.cfg.certificates.gates[i];
  }
  out << "]: " << (su.gates_pass ? "PASS" : "FAIL") << "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

void write_json(const fs::path& path, const ordered_json& j) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << j.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// check

int cmd_check(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  Setup su = make_setup(config_path, seed);
  print_certificates(out, su);

  const fs::path dir = prepare_out_dir(out_dir);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "check";
  j["certificates"] = certificates_json(su.certificates);
  j["required_gates"] = su.cfg.certificates.gates;
  j["required_pass"] = su.gates_pass;
  const fs::path report = dir / su.cfg.output.report;
  write_json(report, j);
  out << "report: " << report.string() << "\n";
  out << "RESULT: " << (su.gates_pass ? "PASS" : "FAIL") << "\n";
  return su.gates_pass ? kExitOk : kExitGateOrAudit;
}

// ---------------------------------------------------------------------------
// run

struct AuditSummary {
  ordered_json json;
  bool pass = true;
};

AuditSummary audit_trajectory(const RunConfig& cfg, const CertificateReport& cert,
                              const DiagnosticsSeries& series, bool require_sobolev,
                              std::ostream& out) {
  AuditSummary summary;

  // Decay envelope against the certified rate.
  if (cert.rate > 0.0) {
    const EnvelopeAudit env =
        audit_decay_envelope(series, cert.rate, cfg.diagnostics.envelope_tol);
    summary.json["envelope"] = {{"pass", env.pass},
                                {"rate", cert.rate},
                                {"tol", cfg.diagnostics.envelope_tol},
                                {"worst_margin", env.worst_margin},
                                {"worst_t", env.worst_t}};
    summary.pass = summary.pass && env.pass;
    out << "audit envelope (rate " << fmt_g(cert.rate) << "): "
        << (env.pass ? "pass" : "FAIL") << " (worst margin " << fmt_g(env.worst_margin)
        << " at t=" << fmt_g(env.worst_t) << ")\n";
  } else {
    summary.json["envelope"] = {{"skipped", "no positive certified rate"}};
    out << "audit envelope: skipped (no positive certified rate)\n";
  }

  // Dissipation inequality with kind-matched weights, clamped at zero.
  double wA = 0.0, wb = 0.0;
  switch (cert.model) {
    case ModelKind::muskat_capillary:
      wA = cert.sigma ? std::max(cert.sigma->delta_A, 0.0) : 0.0;
      wb = cert.sigma ? std::max(cert.sigma->delta_b, 0.0) : 0.0;
      break;
    case ModelKind::muskat_gravity:
      wb = cert.sigma ? std::max(cert.sigma->delta_b, 0.0) : 0.0;
      break;
    case ModelKind::stokes_capillary:
      wA = cert.Sigma ? std::max(cert.Sigma->epsilon, 0.0) : 0.0;
      break;
    case ModelKind::stokes_gravity:
      wb = cert.Sigma ? std::max(cert.Sigma->epsilon, 0.0) : 0.0;
      break;
  }
  const EnergyAudit en =
      audit_energy_inequality(series, wA, wb, cfg.diagnostics.energy_tol);
  summary.json["energy"] = {{"pass", en.pass},          {"weight_fourth", wA},
                            {"weight_second", wb},      {"tol", cfg.diagnostics.energy_tol},
                            {"worst_slack", en.worst_slack}, {"worst_t", en.worst_t},
                            {"checked", en.checked}};
  summary.pass = summary.pass && en.pass;
  out << "audit energy (weights " << fmt_g(wA) << ", " << fmt_g(wb)
      << "): " << (en.pass ? "pass" : "FAIL") << " (worst slack " << fmt_g(en.worst_slack)
      << " at t=" << fmt_g(en.worst_t) << ", " << en.checked << " checked)\n";

  // Positivity of both layers along the trajectory.
  if (cfg.diagnostics.positivity) {
    bool pos = true;
    for (const DiagnosticsSample& s : series.samples)
      pos = pos && s.min_f > 0.0 && s.min_g > 0.0;
    summary.json["positivity"] = {{"pass", pos}};
    summary.pass = summary.pass && pos;
    out << "audit positivity: " << (pos ? "pass" : "FAIL") << "\n";
  }

  // Higher-regularity propagation, when the higher gate is in force:
  // the order-2 energy stays below twice its initial value and the order-4
  // integral converges.
  if (require_sobolev) {
    const auto& so = cfg.diagnostics.sobolev_orders;
    const bool have = std::find(so.begin(), so.end(), 2) != so.end() &&
                      std::find(so.begin(), so.end(), 4) != so.end();
    if (have && !series.samples.empty()) {
      const std::size_t i2 = static_cast<std::size_t>(
          std::find(so.begin(), so.end(), 2) - so.begin());
      const double bound = 2.0 * series.samples.front().e_sobolev[i2];
      const SobolevAudit sa = audit_sobolev_propagation(series, 2, 4, bound);
      summary.json["sobolev"] = {{"pass", sa.pass},
                                 {"sup_order2", sa.sup_half},
                                 {"bound", bound},
                                 {"integral_order4", sa.integral_full},
                                 {"integral_converging", sa.integral_converging}};
      summary.pass = summary.pass && sa.pass;
      out << "audit regularity: " << (sa.pass ? "pass" : "FAIL") << " (sup "
          << fmt_g(sa.sup_half) << " vs bound " << fmt_g(bound) << ")\n";
    } else {
      summary.json["sobolev"] = {{"skipped", "orders 2 and 4 not both sampled"}};
      out << "audit regularity: skipped (orders 2 and 4 not both sampled)\n";
    }
  }

  // Observed decay rate, informational.
  try {
    const RateFit fit = fit_decay_rate(series, cfg.diagnostics.fit_skip_fraction);
    summary.json["fitted_rate"] = {{"rate", fit.rate},
                                   {"residual", fit.residual},
                                   {"n_used", fit.n_used}};
    out << "fitted decay rate " << fmt_g(fit.rate) << " (residual "
        << fmt_g(fit.residual) << ", " << fit.n_used << " samples)\n";
  } catch (const std::invalid_argument& e) {
    summary.json["fitted_rate"] = {{"error", e.what()}};
  }
  return summary;
}

void emit_plot_script(const fs::path& path, const RunConfig& cfg,
                      const CertificateReport& cert) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << "#!/usr/bin/env python3\n"
       "# Semilog decay of the zero-order coefficient-sum energy against the\n"
       "# certified exponential envelope.  Generated alongside the CSV it reads.\n"
       "import csv\n"
       "import math\n"
       "import matplotlib\n"
       "matplotlib.use(\"Agg\")\n"
       "import matplotlib.pyplot as plt\n"
       "\n";
  f << "CSV = \"" << cfg.output.csv << "\"\n"
    << "RATE = " << fmt_g(cert.rate) << "\n"
    << "TOL = " << fmt_g(cfg.diagnostics.envelope_tol) << "\n"
    << "MODEL = \"" << to_string(cert.model) << "\"\n"
    << "\n"
       "ts, e0 = [], []\n"
       "with open(CSV) as fh:\n"
       "    for row in csv.DictReader(fh):\n"
       "        ts.append(float(row[\"t\"]))\n"
       "        e0.append(float(row[\"E_wiener_0\"]))\n"
       "plt.semilogy(ts, e0, label=\"E0(t)\")\n"
       "if e0 and e0[0] > 0 and RATE > 0:\n"
       "    env = [e0[0] * math.exp(-RATE * (t - ts[0])) * (1 + TOL) for t in ts]\n"
       "    plt.semilogy(ts, env, \"--\", label=f\"envelope, rate {RATE:g}\")\n"
       "plt.xlabel(\"t\")\n"
       "plt.ylabel(\"E0\")\n"
       "plt.title(MODEL)\n"
       "plt.legend()\n"
       "plt.savefig(\"decay.png\", dpi=150)\n"
       "print(\"wrote decay.png\")\n";
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force,
            bool emit_plot, std::optional<std::uint64_t> seed, std::ostream& out,
            std::ostream& err) {
  Setup su = make_setup(config_path, seed);
  print_certificates(out, su);
  const fs::path dir = prepare_out_dir(out_dir);

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "run";
  j["certificates"] = certificates_json(su.certificates);
  j["required_gates"] = su.cfg.certificates.gates;
  j["required_pass"] = su.gates_pass;

  if (!su.gates_pass && !force) {
    j["aborted"] = "required gates failed";
    const fs::path report = dir / su.cfg.output.report;
    write_json(report, j);
    out << "report: " << report.string() << "\n";
    err << "aborting: required gates failed (use --force to integrate anyway)\n";
    out << "RESULT: FAIL\n";
    return kExitGateOrAudit;
  }
  if (!su.gates_pass) out << "forced: integrating despite failed gates\n";

  IntegrateResult result;
  try {
    result = integrate(su.initial, su.cfg.stepper, *su.rhs, su.cfg.diagnostics,
                       [&](const std::string& w) { err << "warning: " << w << "\n"; });
  } catch (const NumericalFailure& e) {
    j["numerical_failure"] = {{"t", e.t}, {"step", e.step}};
    const fs::path report = dir / su.cfg.output.report;
    write_json(report, j);
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  const long long n_steps = std::llround(su.cfg.stepper.t_end / su.cfg.stepper.dt);
  out << "integrated " << n_steps << " steps to t=" << fmt_g(result.state.t) << " (K="
      << su.cfg.stepper.K << ", dt=" << fmt_g(su.cfg.stepper.dt) << ", "
      << to_string(su.cfg.stepper.scheme) << ")\n";

  const fs::path csv_path = dir / su.cfg.output.csv;
  {
    std::ofstream csv(csv_path);
    if (!csv) throw ConfigError("cannot write " + csv_path.string());
    write_csv(result.series, csv);
  }
  out << "csv: " << csv_path.string() << "\n";

  const bool higher_gate =
      (std::find(su.cfg.certificates.gates.begin(), su.cfg.certificates.gates.end(),
                 "thm3") != su.cfg.certificates.gates.end() &&
       su.certificates.gates.thm3 == GateStatus::pass) ||
      (std::find(su.cfg.certificates.gates.begin(), su.cfg.certificates.gates.end(),
                 "thm4") != su.cfg.certificates.gates.end() &&
       su.certificates.gates.thm4 == GateStatus::pass) ||
      (std::find(su.cfg.certificates.gates.begin(), su.cfg.certificates.gates.end(),
                 "thm6") != su.cfg.certificates.gates.end() &&
       su.certificates.gates.thm6 == GateStatus::pass);
  AuditSummary audits =
      audit_trajectory(su.cfg, su.certificates, result.series, higher_gate, out);
  j["audits"] = audits.json;
  j["outputs"] = {{"csv", csv_path.string()}};
  j["final"] = {{"t", result.state.t},
                {"e_wiener_0", result.series.samples.back().e_wiener_0}};

  if (emit_plot) {
    const fs::path plot = dir / su.cfg.output.plot_script;
    emit_plot_script(plot, su.cfg, su.certificates);
    j["outputs"]["plot_script"] = plot.string();
    out << "plot script: " << plot.string() << "\n";
  }

  const fs::path report = dir / su.cfg.output.report;
  write_json(report, j);
  out << "report: " << report.string() << "\n";

  const bool ok = audits.pass && (su.gates_pass || force);
  out << "RESULT: " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitGateOrAudit;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  RunConfig base = load_config(config_path);
  if (base.sweep.axes.empty())
    throw ConfigError("sweep: config declares no [sweep] axes");

  const fs::path dir = prepare_out_dir(out_dir);
  const bool muskat = is_muskat(base.model.kind);

  std::vector<std::size_t> idx(base.sweep.axes.size(), 0);
  std::vector<ordered_json> points;
  std::ostringstream csv;

  csv << "point";
  for (const SweepAxis& ax : base.sweep.axes) csv << "," << ax.key;
  csv << ",e0,smallness_ok";
  if (muskat) {
    csv << ",sigma1_A,sigma2_A,sigma1_b,sigma2_b,delta_A,delta_b";
  } else {
    csv << ",Sigma1,Sigma2,epsilon";
  }
  csv << ",rate,gates_pass";
  if (base.sweep.run) csv << ",status,final_e0,fitted_rate";
  csv << "\n";

  long long point_no = 0;
  bool more = true;
  while (more) {
    RunConfig cfg = base;
    ordered_json pj;
    for (std::size_t a = 0; a < base.sweep.axes.size(); ++a) {
      const double v = base.sweep.axes[a].values[idx[a]];
      apply_sweep_value(cfg, base.sweep.axes[a].key, v);
      pj[base.sweep.axes[a].key] = v;
    }
    csv << point_no;
    for (std::size_t a = 0; a < base.sweep.axes.size(); ++a)
      csv << "," << fmt_g(base.sweep.axes[a].values[idx[a]]);

    std::string status = "ok";
    try {
      const SimState s0 = build_initial_state(cfg);
      const CertificateReport rep = evaluate_certificates(cfg, s0);
      bool gates_ok = true;
      for (const std::string& g : cfg.certificates.gates)
        gates_ok = gates_ok && gate_by_name(rep.gates, g) == GateStatus::pass;

      csv << "," << fmt_g(rep.e0) << "," << (rep.smallness_ok ? 1 : 0);
      if (muskat) {
        csv << "," << fmt_g(rep.sigma->sigma1_A) << "," << fmt_g(rep.sigma->sigma2_A)
            << "," << fmt_g(rep.sigma->sigma1_b) << "," << fmt_g(rep.sigma->sigma2_b)
            << "," << fmt_g(rep.sigma->delta_A) << "," << fmt_g(rep.sigma->delta_b);
      } else {
        csv << "," << fmt_g(rep.Sigma->Sigma1) << "," << fmt_g(rep.Sigma->Sigma2) << ","
            << fmt_g(rep.Sigma->epsilon);
      }
      csv << "," << fmt_g(rep.rate) << "," << (gates_ok ? 1 : 0);
      pj["certificates"] = certificates_json(rep);
      pj["gates_pass"] = gates_ok;

      if (base.sweep.run) {
        try {
          auto rhs = build_rhs(cfg);
          const IntegrateResult r =
              integrate(s0, cfg.stepper, *rhs, cfg.diagnostics);
          const double final_e0 = r.series.samples.back().e_wiener_0;
          double fitted = std::nan("");
          try {
            fitted = fit_decay_rate(r.series, cfg.diagnostics.fit_skip_fraction).rate;
          } catch (const std::invalid_argument&) {
          }
          csv << ",ok," << fmt_g(final_e0) << "," << fmt_g(fitted);
          pj["final_e0"] = final_e0;
          if (std::isfinite(fitted)) pj["fitted_rate"] = fitted;
        } catch (const NumericalFailure& e) {
          status = "numerical_failure";
          csv << ",numerical_failure,nan,nan";
          pj["numerical_failure"] = {{"t", e.t}, {"step", e.step}};
          err << "point " << point_no << ": " << e.what() << "\n";
        }
      }
    } catch (const ConfigError& e) {
      // An axis combination outside the model's admissible parameters is a
      // data point of the map, not a fatal error.
      status = "config_error";
      csv << ",nan,0";
      csv << (muskat ? ",nan,nan,nan,nan,nan,nan" : ",nan,nan,nan");
      csv << ",nan,0";
      if (base.sweep.run) csv << ",config_error,nan,nan";
      pj["config_error"] = e.what();
      err << "point " << point_no << ": " << e.what() << "\n";
    }
    csv << "\n";
    pj["status"] = status;
    points.push_back(std::move(pj));
    ++point_no;

    // Lexicographic odometer: the last axis varies fastest.
    more = false;
    for (std::size_t a = base.sweep.axes.size(); a-- > 0;) {
      if (++idx[a] < base.sweep.axes[a].values.size()) {
        more = true;
        break;
      }
      idx[a] = 0;
    }
  }

  const fs::path csv_path = dir / "sweep.csv";
  {
    std::ofstream f(csv_path);
    if (!f) throw ConfigError("cannot write " + csv_path.string());
    f << csv.str();
  }
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "sweep";
  j["points"] = points;
  j["outputs"] = {{"csv", csv_path.string()}};
  const fs::path report = dir / base.output.report;
  write_json(report, j);
  out << point_no << " sweep points -> " << csv_path.string() << "\n";
  out << "report: " << report.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// convergence

int cmd_convergence(const std::string& config_path, const std::string& out_dir,
                    std::ostream& out, std::ostream& /*err*/) {
  RunConfig cfg = load_config(config_path);
  const fs::path dir = prepare_out_dir(out_dir);

  auto rhs = build_rhs(cfg);
  const SimState s0 = build_initial_state(cfg);

  auto final_state = [&](double dt, int K) {
    StepperConfig sc = cfg.stepper;
    sc.dt = dt;
    sc.K = K;
    DiagnosticsConfig quiet;
    quiet.sobolev_orders = {};
    quiet.sup_orders = {};
    quiet.positivity = false;
    return integrate(s0, sc, *rhs, quiet);
  };
  auto max_diff = [](const SimState& a, const SimState& b) {
    double m = 0.0;
    const int K = std::min(a.K(), b.K());
    for (int k = 0; k <= K; ++k) {
      m = std::max(m, std::abs(a.fbar.coeff(k) - b.fbar.coeff(k)));
      m = std::max(m, std::abs(a.gbar.coeff(k) - b.gbar.coeff(k)));
    }
    return m;
  };

  const double dt = cfg.stepper.dt;
  const int K = cfg.stepper.K;
  out << "time-step refinement at K=" << K << " (dt, dt/2, dt/4):\n";
  const IntegrateResult r1 = final_state(dt, K);
  const IntegrateResult r2 = final_state(dt / 2.0, K);
  const IntegrateResult r3 = final_state(dt / 4.0, K);
  const double d12 = max_diff(r1.state, r2.state);
  const double d23 = max_diff(r2.state, r3.state);
  const double order = std::log2(d12 / d23);
  out << "  |u(dt) - u(dt/2)|   = " << fmt_g(d12) << "\n";
  out << "  |u(dt/2) - u(dt/4)| = " << fmt_g(d23) << "\n";
  out << "  observed order      = " << fmt_g(order) << "\n";

  // Bandwidth refinement at the base dt: compare the energy histories.
  const IntegrateResult rk = final_state(dt, 2 * K);
  double e0_dev = 0.0;
  const std::size_t n = std::min(r1.series.samples.size(), rk.series.samples.size());
  for (std::size_t i = 0; i < n; ++i) {
    e0_dev = std::max(e0_dev, std::abs(r1.series.samples[i].e_wiener_0 -
                                       rk.series.samples[i].e_wiener_0));
  }
  out << "bandwidth refinement K=" << K << " vs " << 2 * K
      << ": max |E0 - E0'| = " << fmt_g(e0_dev) << "\n";

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "convergence";
  j["scheme"] = to_string(cfg.stepper.scheme);
  j["dt_refinement"] = {{"dt", dt},
                        {"diff_dt_dt2", d12},
                        {"diff_dt2_dt4", d23},
                        {"observed_order", order}};
  j["k_refinement"] = {{"K", K}, {"K2", 2 * K}, {"max_e0_deviation", e0_dev}};
  const fs::path report = dir / cfg.output.report;
  write_json(report, j);
  out << "report: " << report.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(int trials, double tighten, std::uint64_t seed,
               const std::string& out_dir, std::ostream& out) {
  verify::SuiteOptions opt;
  opt.trials = trials;
  opt.tighten = tighten;
  opt.seed = seed;

  std::vector<verify::SuiteResult> results = verify::inequality_suites(opt);
  std::vector<verify::SuiteResult> oracle = verify::oracle_suites(opt);
  results.insert(results.end(), oracle.begin(), oracle.end());

  ordered_json rows = ordered_json::array();
  bool pass = true;
  for (const verify::SuiteResult& r : results) {
    out << (r.violations == 0 ? "pass " : "FAIL ") << r.name << ": " << r.trials
        << " trials, " << r.violations << " violations, worst slack "
        << fmt_g(r.worst_slack) << "\n";
    if (r.violations > 0) {
      pass = false;
      out << "  worst case: " << r.worst_case << "\n";
    }
    rows.push_back({{"name", r.name},
                    {"trials", r.trials},
                    {"violations", r.violations},
                    {"worst_slack", r.worst_slack}});
  }
  out << (pass ? "all suites passed" : "SUITE FAILURES PRESENT") << "\n";

  const fs::path dir = prepare_out_dir(out_dir);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "verify";
  j["trials"] = trials;
  j["tighten"] = tighten;
  j["seed"] = seed;
  j["suites"] = rows;
  j["pass"] = pass;
  write_json(dir / "verify_report.json", j);
  return pass ? kExitOk : kExitGateOrAudit;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Fourier-Galerkin simulator and hypothesis-certificate checker for "
               "two-phase thin-film evolutions"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool force = false;
  bool emit_plot = false;
  auto seed = std::make_shared<std::optional<std::uint64_t>>();

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", config_path, "INI configuration file");
    if (needs_config) c->required();
    sub->add_option("--out", out_dir, "output directory (created if missing)");
    return sub;
  };

  CLI::App* check = add_common(app.add_subcommand("check", "evaluate certificates on the initial data"), true);
  CLI::App* run = add_common(app.add_subcommand("run", "integrate and audit a trajectory"), true);
  run->add_flag("--force", force, "integrate even when required gates fail");
  run->add_flag("--emit-plot-script", emit_plot, "write a python decay-plot script");
  CLI::App* sweep = add_common(app.add_subcommand("sweep", "map certificates over parameter axes"), true);
  CLI::App* conv = add_common(app.add_subcommand("convergence", "dt and bandwidth refinement study"), true);

  int trials = 1000;
  double tighten = 1.0;
  std::uint64_t vseed = 20250821;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "randomized functional-inequality and oracle suites");
  verify_cmd->add_option("--trials", trials, "trials per suite");
  verify_cmd->add_option("--tighten", tighten,
                         "scale inequality constants (< 1 must produce failures)");
  verify_cmd->add_option("--seed", vseed, "suite seed");
  verify_cmd->add_option("--out", out_dir, "output directory");

  for (CLI::App* sub : {check, run}) {
    sub->add_option_function<std::uint64_t>(
        "--seed", [seed](const std::uint64_t& v) { *seed = v; },
        "override the random-decay initial-data seeds");
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("thinfilm");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check->parsed()) return cmd_check(config_path, out_dir, *seed, out);
    if (run->parsed()) return cmd_run(config_path, out_dir, force, emit_plot, *seed, out, err);
    if (sweep->parsed()) return cmd_sweep(config_path, out_dir, out, err);
    if (conv->parsed()) return cmd_convergence(config_path, out_dir, out, err);
    if (verify_cmd->parsed()) return cmd_verify(trials, tighten, vseed, out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  err << "no subcommand given\n";
  return kExitConfig;
}

}  // namespace thinfilm
