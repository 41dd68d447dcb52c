#include "thinfilm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "thinfilm/norms.hpp"

namespace thinfilm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void fmt17(std::ostream& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

}  // namespace

DiagnosticsSample sample(const SimState& s, const DiagnosticsConfig& cfg) {
  DiagnosticsSample d;
  d.t = s.t;
  d.mass_f = s.fbar.mean();
  d.mass_g = s.gbar.mean();
  d.e_wiener_0 = wiener_norm(s.fbar, 0.0) + wiener_norm(s.gbar, 0.0);
  d.e_wiener_2 = wiener_norm(s.fbar, 2.0) + wiener_norm(s.gbar, 2.0);
  d.e_wiener_4 = wiener_norm(s.fbar, 4.0) + wiener_norm(s.gbar, 4.0);
  d.e_sobolev.reserve(cfg.sobolev_orders.size());
  for (int order : cfg.sobolev_orders) {
    const double nf = sobolev_norm(s.fbar, static_cast<double>(order));
    const double ng = sobolev_norm(s.gbar, static_cast<double>(order));
    d.e_sobolev.push_back(nf * nf + ng * ng);
  }
  d.e_sup.reserve(cfg.sup_orders.size());
  for (int order : cfg.sup_orders) {
    d.e_sup.push_back(sup_norm_deriv(s.fbar, order) + sup_norm_deriv(s.gbar, order));
  }
  const PositivityResult p = check_positivity(s);
  d.min_f = p.min_f;
  d.min_g = p.min_g;
  return d;
}

EnvelopeAudit audit_decay_envelope(const DiagnosticsSeries& series, double rate,
                                   double tol) {
  if (!(rate >= 0.0)) throw std::invalid_argument("audit_decay_envelope: rate must be >= 0");
  if (series.samples.empty()) {
    throw std::invalid_argument("audit_decay_envelope: empty series");
  }
  const double e00 = series.samples.front().e_wiener_0;
  EnvelopeAudit a;
  if (e00 == 0.0) {
    // A zero start admits only the zero trajectory.
    a.pass = true;
    a.worst_margin = kInf;
    for (const DiagnosticsSample& s : series.samples) {
      if (s.e_wiener_0 > 0.0) {
        a.pass = false;
        if (-s.e_wiener_0 < a.worst_margin) {
          a.worst_margin = -s.e_wiener_0;
          a.worst_t = s.t;
        }
      }
    }
    return a;
  }
  const double t0 = series.samples.front().t;
  a.pass = true;
  a.worst_margin = kInf;
  for (const DiagnosticsSample& s : series.samples) {
    const double bound = e00 * std::exp(-rate * (s.t - t0)) * (1.0 + tol);
    const double margin = bound - s.e_wiener_0;
    if (margin < a.worst_margin) {
      a.worst_margin = margin;
      a.worst_t = s.t;
    }
    if (margin < 0.0) a.pass = false;
  }
  return a;
}

EnergyAudit audit_energy_inequality(const DiagnosticsSeries& series, double delta_A,
                                    double delta_b, double tol) {
  const auto& v = series.samples;
  EnergyAudit a;
  a.worst_slack = kInf;
  a.pass = true;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    const double span = v[i + 1].t - v[i - 1].t;
    if (!(span > 0.0)) {
      throw std::invalid_argument("audit_energy_inequality: samples not increasing in t");
    }
    const double ddt = (v[i + 1].e_wiener_0 - v[i - 1].e_wiener_0) / span;
    const double lhs = ddt + delta_A * v[i].e_wiener_4 + delta_b * v[i].e_wiener_2;
    const double slack = tol * (1.0 + v[i].e_wiener_4) - lhs;
    ++a.checked;
    if (slack < a.worst_slack) {
      a.worst_slack = slack;
      a.worst_t = v[i].t;
    }
    if (slack < 0.0) a.pass = false;
  }
  return a;
}

RateFit fit_decay_rate(const DiagnosticsSeries& series, double skip_fraction) {
  const auto& v = series.samples;
  if (skip_fraction < 0.0 || skip_fraction >= 1.0) {
    throw std::invalid_argument("fit_decay_rate: skip fraction must lie in [0, 1)");
  }
  const size_t start = static_cast<size_t>(skip_fraction * static_cast<double>(v.size()));
  if (v.size() < start + 3) {
    throw std::invalid_argument("fit_decay_rate: need at least 3 samples in the window");
  }
  double sum_t = 0.0, sum_y = 0.0;
  const size_t n = v.size() - start;
  for (size_t i = start; i < v.size(); ++i) {
    if (!(v[i].e_wiener_0 > 0.0)) {
      throw std::invalid_argument("fit_decay_rate: energy must be positive on the window");
    }
    sum_t += v[i].t;
    sum_y += std::log(v[i].e_wiener_0);
  }
  const double mean_t = sum_t / static_cast<double>(n);
  const double mean_y = sum_y / static_cast<double>(n);
  double stt = 0.0, sty = 0.0;
  for (size_t i = start; i < v.size(); ++i) {
    const double dt = v[i].t - mean_t;
    stt += dt * dt;
    sty += dt * (std::log(v[i].e_wiener_0) - mean_y);
  }
  if (!(stt > 0.0)) {
    throw std::invalid_argument("fit_decay_rate: degenerate time window");
  }
  RateFit fit;
  fit.n_used = static_cast<int>(n);
  const double slope = sty / stt;
  fit.rate = -slope;
  double ss = 0.0;
  for (size_t i = start; i < v.size(); ++i) {
    const double pred = mean_y + slope * (v[i].t - mean_t);
    const double r = std::log(v[i].e_wiener_0) - pred;
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

SobolevAudit audit_sobolev_propagation(const DiagnosticsSeries& series, int s_half,
                                       int s_full, double s_bound) {
  const auto& orders = series.config.sobolev_orders;
  const auto find = [&](int order) {
    for (size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] == order) return i;
    }
    throw std::invalid_argument("audit_sobolev_propagation: order " +
                                std::to_string(order) + " not in the series");
  };
  const size_t ih = find(s_half);
  const size_t if_ = find(s_full);
  const auto& v = series.samples;
  if (v.empty()) throw std::invalid_argument("audit_sobolev_propagation: empty series");

  SobolevAudit a;
  for (const DiagnosticsSample& s : v) {
    a.sup_half = std::max(a.sup_half, s.e_sobolev[ih]);
  }

  // Trapezoid increments of the running integral of the order-s_full energy.
  std::vector<double> inc;
  inc.reserve(v.size());
  for (size_t i = 1; i < v.size(); ++i) {
    const double dt = v[i].t - v[i - 1].t;
    const double piece = 0.5 * dt * (v[i].e_sobolev[if_] + v[i - 1].e_sobolev[if_]);
    a.integral_full += piece;
    inc.push_back(piece);
  }
  if (inc.size() < 8) {
    // Too short to compare windows; require only finiteness.
    a.integral_converging = std::isfinite(a.integral_full);
  } else {
    const size_t q = inc.size() / 4;
    double head = 0.0, tail = 0.0;
    for (size_t i = 0; i < q; ++i) head += inc[i];
    for (size_t i = inc.size() - q; i < inc.size(); ++i) tail += inc[i];
    a.integral_converging = tail <= head * (1.0 + 1e-9);
  }
  a.pass = a.sup_half <= s_bound && a.integral_converging &&
           std::isfinite(a.integral_full);
  return a;
}

PositivityResult check_positivity(const SimState& s) {
  PositivityResult p;
  p.min_f = grid_min(s.fbar) + s.mean_f;
  p.min_g = grid_min(s.gbar) + s.mean_g;
  p.ok = p.min_f > 0.0 && p.min_g > 0.0;
  return p;
}

void write_csv(const DiagnosticsSeries& series, std::ostream& out) {
  out << "t,mass_f,mass_g,E_wiener_0,E_wiener_2,E_wiener_4";
  for (int order : series.config.sobolev_orders) out << ",E_sob_" << order;
  for (int order : series.config.sup_orders) out << ",E_sup_" << order;
  out << ",min_f,min_g\n";
  for (const DiagnosticsSample& s : series.samples) {
    fmt17(out, s.t);
    for (double x : {s.mass_f, s.mass_g, s.e_wiener_0, s.e_wiener_2, s.e_wiener_4}) {
      out << ',';
      fmt17(out, x);
    }
    for (double x : s.e_sobolev) {
      out << ',';
      fmt17(out, x);
    }
    for (double x : s.e_sup) {
      out << ',';
      fmt17(out, x);
    }
    out << ',';
    fmt17(out, s.min_f);
    out << ',';
    fmt17(out, s.min_g);
    out << '\n';
  }
}

}  // namespace thinfilm
