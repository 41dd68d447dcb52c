#include "thinfilm/verify_suites.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "thinfilm/muskat.hpp"
#include "thinfilm/norms.hpp"
#include "thinfilm/rng.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/stokes.hpp"
#include "thinfilm/trig_poly.hpp"

namespace thinfilm::verify {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string serialize(const TrigPoly& u) {
  std::string s;
  for (int k = 1; k <= u.K(); ++k) {
    const Complex c = u.coeff(k);
    if (c == Complex{0.0, 0.0}) continue;
    if (!s.empty()) s += ' ';
    s += std::to_string(k) + ':' + fmt(c.real()) + ':' + fmt(c.imag());
  }
  return s.empty() ? "0" : s;
}

// Collects per-trial slacks, keeping the tightest draw and a serialized
// counterexample whenever the inequality actually fails.
class Recorder {
 public:
  Recorder(std::string name, const std::function<std::string()>& describe)
      : describe_(describe) {
    result_.name = std::move(name);
  }

  void record(int trial, double lhs, double rhs) {
    const double slack = rhs - lhs;
    ++result_.trials;
    if (slack < 0) ++result_.violations;
    if (slack < result_.worst_slack) {
      result_.worst_slack = slack;
      result_.worst_case = "trial " + std::to_string(trial) +
                           ": lhs=" + fmt(lhs) + " rhs=" + fmt(rhs);
      if (slack < 0) result_.worst_case += " input{" + describe_() + "}";
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
  std::function<std::string()> describe_;
};

struct Draw {
  TrigPoly u;
  TrigPoly v;
};

Draw draw_pair(Rng& rng, int Kmin, int Kmax) {
  const int K = rng.uniform_int(Kmin, Kmax);
  const double amp_u = rng.uniform(0.1, 2.0);
  const double dec_u = rng.uniform(0.5, 2.5);
  const double amp_v = rng.uniform(0.1, 2.0);
  const double dec_v = rng.uniform(0.5, 2.5);
  return {rng.random_decay_poly(K, amp_u, dec_u),
          rng.random_decay_poly(K, amp_v, dec_v)};
}

// Oversampled grid for sup-norm comparisons inside the inequality suites:
// relative grid error ~ (pi/512)^2/2 ~ 2e-5, far below the generic slack of
// the inequalities on random draws.
int sup_grid(const TrigPoly& u) { return 512 * std::max(u.K(), 1); }

}  // namespace

std::vector<SuiteResult> inequality_suites(const SuiteOptions& opt) {
  std::vector<SuiteResult> out;
  const double tight = opt.tighten;

  // Product bound on the weighted coefficient-sum scale:
  // ||uv - <uv>||_{alpha} <= 2^{alpha+1} ||u||_{alpha} ||v||_{alpha}.
  for (const double alpha : {0.0, 1.0, 2.0, 4.0}) {
    Rng rng(opt.seed + 11);
    Draw d;
    Recorder rec("banach_algebra_a" + std::to_string(static_cast<int>(alpha)),
                 [&] { return "u{" + serialize(d.u) + "} v{" + serialize(d.v) + "}"; });
    const double c = tight * std::pow(2.0, alpha + 1.0);
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const TrigPoly w = product(d.u, d.v).mean_removed();
      rec.record(t, wiener_norm(w, alpha),
                 c * wiener_norm(d.u, alpha) * wiener_norm(d.v, alpha));
    }
    out.push_back(rec.take());
  }

  // Interpolation along the weighted scale:
  // ||u||_{alpha} <= ||u||_0^{1-theta} ||u||_{alpha/theta}^{theta}.
  for (const double alpha : {1.0, 2.0}) {
    for (const double theta : {0.25, 0.5, 0.75}) {
      Rng rng(opt.seed + 23);
      Draw d;
      char name[64];
      std::snprintf(name, sizeof name, "interpolation_a%g_t%g", alpha, theta);
      Recorder rec(name, [&] { return "u{" + serialize(d.u) + "}"; });
      for (int t = 0; t < opt.trials; ++t) {
        d = draw_pair(rng, 2, 16);
        rec.record(t, wiener_norm(d.u, alpha),
                   tight * std::pow(wiener_norm(d.u, 0.0), 1.0 - theta) *
                       std::pow(wiener_norm(d.u, alpha / theta), theta));
      }
      out.push_back(rec.take());
    }
  }

  // Kolmogorov-Landau: ||u'||_inf^2 <= 2 ||u||_inf ||u''||_inf.
  {
    Rng rng(opt.seed + 37);
    Draw d;
    Recorder rec("kolmogorov_landau",
                 [&] { return "u{" + serialize(d.u) + "}"; });
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const int M = sup_grid(d.u);
      const double s1 = sup_norm_deriv(d.u, 1, M);
      rec.record(t, s1 * s1,
                 tight * 2.0 * sup_norm_deriv(d.u, 0, M) * sup_norm_deriv(d.u, 2, M));
    }
    out.push_back(rec.take());
  }

  // Iterated form: ||u''||_inf <= 4 ||u||_inf^{1/2} ||u''''||_inf^{1/2}.
  {
    Rng rng(opt.seed + 41);
    Draw d;
    Recorder rec("kolmogorov_landau_iterated",
                 [&] { return "u{" + serialize(d.u) + "}"; });
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const int M = sup_grid(d.u);
      rec.record(t, sup_norm_deriv(d.u, 2, M),
                 tight * 4.0 *
                     std::sqrt(sup_norm_deriv(d.u, 0, M)) *
                     std::sqrt(sup_norm_deriv(d.u, 4, M)));
    }
    out.push_back(rec.take());
  }

  // L4 bounds with constant 3 against the coefficient-sum Sobolev norm.
  // This is the stronger of the two norm conventions (the integral-norm
  // variant carries an extra sqrt(2*pi) of headroom), so passing here
  // certifies both.  A directed coefficient hill-climb tops out near ratio
  // 2.39 of the allowed 3 for the gradient form and 2.17 (single-mode
  // value) for the third-derivative form, so the suite has real margin.
  {
    Rng rng(opt.seed + 43);
    Draw d;
    Recorder rec("l4_gradient", [&] { return "u{" + serialize(d.u) + "}"; });
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const double l4 = lp4_norm_deriv(d.u, 1);
      rec.record(t, l4 * l4,
                 tight * 3.0 * sup_norm_deriv(d.u, 0, sup_grid(d.u)) *
                     sobolev_norm(d.u, 2.0));
    }
    out.push_back(rec.take());
  }
  {
    Rng rng(opt.seed + 47);
    Draw d;
    Recorder rec("l4_third", [&] { return "u{" + serialize(d.u) + "}"; });
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const double l4 = lp4_norm_deriv(d.u, 3);
      rec.record(t, l4 * l4,
                 tight * 3.0 * sup_norm_deriv(d.u, 2, sup_grid(d.u)) *
                     sobolev_norm(d.u, 4.0));
    }
    out.push_back(rec.take());
  }

  // Embedding of the weighted-coefficient space into H4:
  // ||u||_{H4} <= sqrt(2*pi) ||u||_{A4}.
  {
    Rng rng(opt.seed + 53);
    Draw d;
    Recorder rec("embedding_h4", [&] { return "u{" + serialize(d.u) + "}"; });
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      rec.record(t, sobolev_norm(d.u, 4.0),
                 tight * std::sqrt(2.0 * std::numbers::pi) * wiener_norm(d.u, 4.0));
    }
    out.push_back(rec.take());
  }

  // Parseval consistency: quadrature L2 agrees with the coefficient sum.
  {
    Rng rng(opt.seed + 59);
    Draw d;
    Recorder rec("parseval", [&] { return "u{" + serialize(d.u) + "}"; });
    const double root2pi = std::sqrt(2.0 * std::numbers::pi);
    for (int t = 0; t < opt.trials; ++t) {
      d = draw_pair(rng, 2, 16);
      const double s0 = sobolev_norm(d.u, 0.0);
      const double err = std::abs(l2_norm_quadrature(d.u) / root2pi - s0);
      rec.record(t, err, tight * 1e-10 * std::max(1.0, s0));
    }
    out.push_back(rec.take());
  }

  return out;
}

namespace {

// Random simulation state: equal bandwidth for both components, modest
// amplitudes, positive means.  cosine_only restricts to purely real
// coefficients (even functions) for the symmetry suites.
SimState draw_state(Rng& rng, int k_min, int k_max, bool cosine_only) {
  SimState s;
  const int K = rng.uniform_int(k_min, k_max);
  if (cosine_only) {
    TrigPoly f(K), g(K);
    const double amp_f = rng.uniform(0.02, 0.2), dec_f = rng.uniform(1.0, 2.5);
    const double amp_g = rng.uniform(0.02, 0.2), dec_g = rng.uniform(1.0, 2.5);
    for (int k = 1; k <= K; ++k) {
      const double wf = amp_f / std::pow(static_cast<double>(k), dec_f);
      const double wg = amp_g / std::pow(static_cast<double>(k), dec_g);
      f.set_coeff(k, Complex{wf * rng.uniform(-1.0, 1.0), 0.0});
      g.set_coeff(k, Complex{wg * rng.uniform(-1.0, 1.0), 0.0});
    }
    s.fbar = std::move(f);
    s.gbar = std::move(g);
  } else {
    s.fbar = rng.random_decay_poly(K, rng.uniform(0.02, 0.2), rng.uniform(1.0, 2.5));
    s.gbar = rng.random_decay_poly(K, rng.uniform(0.02, 0.2), rng.uniform(1.0, 2.5));
  }
  s.mean_f = rng.uniform(0.5, 2.0);
  s.mean_g = rng.uniform(0.5, 2.0);
  return s;
}

MuskatPhysicalParams draw_muskat_params(Rng& rng, bool gravity) {
  MuskatPhysicalParams p;
  p.mu_minus = rng.uniform(0.5, 2.0);
  p.mu_plus = rng.uniform(0.5, 2.0);
  p.rho_minus = rng.uniform(0.5, 2.0);
  p.rho_plus = rng.uniform(0.5, 2.0);
  p.G = rng.uniform(0.5, 2.0);
  if (gravity) {
    p.gamma_f = p.gamma_h = 0.0;
  } else {
    p.gamma_f = rng.uniform(0.0, 1.0);
    p.gamma_h = rng.uniform(0.3, 1.5);
  }
  return p;
}

StokesPhysicalParams draw_stokes_params(Rng& rng, bool gravity) {
  StokesPhysicalParams p;
  p.mu_minus = rng.uniform(0.5, 2.0);
  p.mu_plus = rng.uniform(0.5, 2.0);
  if (gravity) {
    p.drive = StokesDrive::gravity;
    p.gamma_f = p.gamma_h = 0.0;
    p.rho_plus = rng.uniform(0.5, 1.0);
    p.rho_minus = p.rho_plus + rng.uniform(0.2, 1.0);
    p.G = rng.uniform(0.5, 2.0);
  } else {
    p.drive = StokesDrive::capillary;
    p.rho_minus = rng.uniform(0.5, 2.0);
    p.rho_plus = rng.uniform(0.5, 2.0);
    p.gamma_f = rng.uniform(0.0, 1.0);
    p.gamma_h = rng.uniform(0.3, 1.5);
  }
  return p;
}

// Quadrature route for the porous-medium system: synthesize the total
// heights and their derivatives on a fine grid, multiply pointwise, read the
// first K modes back off the grid, and differentiate once.  The only shared
// machinery with the spectral assembly is the (per-mode exact) derivative;
// the product/truncation chain under test is bypassed entirely.
std::pair<TrigPoly, TrigPoly> muskat_quadrature_rhs(const SimState& s,
                                                    const MuskatConstants& c) {
  const int K = s.K();
  const int M = std::max(64, 16 * K);
  const TrigPoly f = s.fbar.with_mean(s.mean_f);
  const TrigPoly g = s.gbar.with_mean(s.mean_g);
  const std::vector<double> fv = grid_values(f, M);
  const std::vector<double> gv = grid_values(g, M);
  const std::vector<double> df1 = grid_values(derivative(f, 1), M);
  const std::vector<double> dg1 = grid_values(derivative(g, 1), M);
  const std::vector<double> df3 = grid_values(derivative(f, 3), M);
  const std::vector<double> dg3 = grid_values(derivative(g, 3), M);
  std::vector<double> wf(static_cast<size_t>(M)), wg(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const size_t u = static_cast<size_t>(j);
    const double brf =
        c.A_gamma * df3[u] + c.A * dg3[u] - c.b_rho * df1[u] - c.b * dg1[u];
    const double brg = c.A_mu * (df3[u] + dg3[u]) - c.b_mu * (df1[u] + dg1[u]);
    wf[u] = fv[u] * brf;
    wg[u] = gv[u] * brg;
  }
  return {-1.0 * derivative(from_grid(wf, K), 1),
          -1.0 * derivative(from_grid(wg, K), 1)};
}

// Quadrature route for the viscous bilayer system: all four cubic
// prefactors are evaluated pointwise from the grid values of the total
// heights, so no spectral product is involved anywhere.
std::pair<TrigPoly, TrigPoly> stokes_quadrature_rhs(const SimState& s,
                                                    const StokesConstants& c) {
  const int K = s.K();
  const int M = std::max(64, 16 * K);
  const TrigPoly f = s.fbar.with_mean(s.mean_f);
  const TrigPoly g = s.gbar.with_mean(s.mean_g);
  const TrigPoly Df = (c.zeta == 1) ? derivative(f, 1) : -1.0 * derivative(f, 3);
  const TrigPoly Dg = (c.zeta == 1) ? derivative(g, 1) : -1.0 * derivative(g, 3);
  const std::vector<double> fv = grid_values(f, M);
  const std::vector<double> gv = grid_values(g, M);
  const std::vector<double> dfv = grid_values(Df, M);
  const std::vector<double> dgv = grid_values(Dg, M);
  std::vector<double> wf(static_cast<size_t>(M)), wg(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const size_t u = static_cast<size_t>(j);
    const double fj = fv[u], gj = gv[u];
    const double f2 = fj * fj, f3 = f2 * fj, g2 = gj * gj, g3 = g2 * gj;
    const double pf_f = 2.0 * c.rho * f3 + 3.0 * f2 * gj;
    const double pf_g = 2.0 * f3 + 3.0 * f2 * gj;
    const double pg_f = 2.0 * c.mu * g3 + 3.0 * c.rho * f2 * gj + 6.0 * fj * g2;
    const double pg_g = 2.0 * c.mu * g3 + 3.0 * f2 * gj + 6.0 * fj * g2;
    wf[u] = pf_f * dfv[u] + pf_g * dgv[u];
    wg[u] = pg_f * dfv[u] + pg_g * dgv[u];
  }
  return {derivative(from_grid(wf, K), 1), derivative(from_grid(wg, K), 1)};
}

// Largest coefficient difference between two RHS pairs, relative to the
// largest coefficient of the first.
double rel_diff(const std::pair<TrigPoly, TrigPoly>& a,
                const std::pair<TrigPoly, TrigPoly>& b) {
  double scale = 0.0, diff = 0.0;
  const auto scan = [&](const TrigPoly& x, const TrigPoly& y) {
    const int K = std::max(x.K(), y.K());
    for (int k = 0; k <= K; ++k) {
      scale = std::max(scale, std::abs(x.coeff(k)));
      diff = std::max(diff, std::abs(x.coeff(k) - y.coeff(k)));
    }
  };
  scan(a.first, b.first);
  scan(a.second, b.second);
  return diff / std::max(scale, 1e-300);
}

double max_imag(const TrigPoly& u) {
  double m = 0.0;
  for (int k = 0; k <= u.K(); ++k) m = std::max(m, std::abs(u.coeff(k).imag()));
  return m;
}

}  // namespace

std::vector<SuiteResult> oracle_suites(const SuiteOptions& opt) {
  std::vector<SuiteResult> out;
  const double tight = opt.tighten;

  struct Kind {
    const char* name;
    bool stokes;
    bool gravity;
  };
  constexpr Kind kinds[] = {{"muskat_capillary", false, false},
                            {"muskat_gravity", false, true},
                            {"stokes_capillary", true, false},
                            {"stokes_gravity", true, true}};

  struct Eval {
    std::pair<TrigPoly, TrigPoly> full;
    std::pair<TrigPoly, TrigPoly> quad;
    std::pair<TrigPoly, TrigPoly> unsplit;
  };

  int kind_index = 0;
  for (const Kind& kind : kinds) {
    const uint64_t base = opt.seed + 997 * static_cast<uint64_t>(++kind_index);

    SimState cur;            // state of the most recent trial
    std::string cur_params;  // reduced constants of the most recent trial
    const auto describe = [&] {
      return "f{" + serialize(cur.fbar) + "} g{" + serialize(cur.gbar) +
             "} F=" + fmt(cur.mean_f) + " G=" + fmt(cur.mean_g) + " " + cur_params;
    };

    const auto eval = [&](Rng& rng, const SimState& s) {
      Eval e;
      if (!kind.stokes) {
        const MuskatPhysicalParams p = draw_muskat_params(rng, kind.gravity);
        const MuskatConstants mc = reduce_params(
            p, kind.gravity ? MuskatVariant::gravity : MuskatVariant::capillary);
        cur_params = "b=" + fmt(mc.b) + " b_mu=" + fmt(mc.b_mu) +
                     " b_rho=" + fmt(mc.b_rho) + " A=" + fmt(mc.A) +
                     " A_mu=" + fmt(mc.A_mu) + " A_gamma=" + fmt(mc.A_gamma);
        e.full = full_rhs(s, mc);
        e.quad = muskat_quadrature_rhs(s, mc);
        e.unsplit = unsplit_rhs(s, mc);
      } else {
        const StokesPhysicalParams p = draw_stokes_params(rng, kind.gravity);
        const StokesConstants sc = reduce_params(p);
        cur_params = "rho=" + fmt(sc.rho) + " mu=" + fmt(sc.mu) +
                     " zeta=" + std::to_string(sc.zeta);
        e.full = full_rhs(s, sc);
        e.quad = stokes_quadrature_rhs(s, sc);
        e.unsplit = unsplit_rhs(s, sc);
      }
      return e;
    };

    // Spectral assembly vs quadrature assembly of the complete RHS.
    {
      Rng rng(base + 1);
      Recorder rec(std::string("rhs_quadrature_") + kind.name, describe);
      for (int t = 0; t < opt.trials; ++t) {
        cur = draw_state(rng, 2, 16, false);
        const Eval e = eval(rng, cur);
        rec.record(t, rel_diff(e.full, e.quad), tight * 1e-10);
      }
      out.push_back(rec.take());
    }

    // Mean-split assembly vs direct assembly on the total heights.
    {
      Rng rng(base + 2);
      Recorder rec(std::string("split_equivalence_") + kind.name, describe);
      for (int t = 0; t < opt.trials; ++t) {
        cur = draw_state(rng, 2, 8, false);
        const Eval e = eval(rng, cur);
        rec.record(t, rel_diff(e.full, e.unsplit), tight * 1e-12);
      }
      out.push_back(rec.take());
    }

    // The RHS never moves the zero mode: conservation holds to the bit.
    {
      Rng rng(base + 3);
      Recorder rec(std::string("mass_zero_") + kind.name, describe);
      for (int t = 0; t < opt.trials; ++t) {
        cur = draw_state(rng, 2, 12, false);
        const Eval e = eval(rng, cur);
        const double lhs =
            std::abs(e.full.first.mean()) + std::abs(e.full.second.mean());
        rec.record(t, lhs, 0.0);
      }
      out.push_back(rec.take());
    }

    // Even data stays even: purely real coefficients in, purely real
    // coefficients out, exactly (the imaginary accumulators only ever see
    // zero factors).
    {
      Rng rng(base + 4);
      Recorder rec(std::string("even_symmetry_") + kind.name, describe);
      for (int t = 0; t < opt.trials; ++t) {
        cur = draw_state(rng, 2, 12, true);
        const Eval e = eval(rng, cur);
        const double lhs = max_imag(e.full.first) + max_imag(e.full.second);
        rec.record(t, lhs, 0.0);
      }
      out.push_back(rec.take());
    }
  }

  return out;
}

bool all_pass(const std::vector<SuiteResult>& results) {
  for (const SuiteResult& r : results) {
    if (r.violations != 0) return false;
  }
  return true;
}

}  // namespace thinfilm::verify
