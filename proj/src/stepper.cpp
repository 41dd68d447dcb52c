#include "thinfilm/stepper.hpp"

#include <cmath>
#include <cstdio>
#include <utility>

#include "thinfilm/norms.hpp"

namespace thinfilm {

namespace {

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string MuskatRhs::describe() const {
  std::string s = "b=" + fmt_g(c_.b) + " b_mu=" + fmt_g(c_.b_mu) +
                  " b_rho=" + fmt_g(c_.b_rho);
  if (c_.variant == MuskatVariant::capillary) {
    s += " A=" + fmt_g(c_.A) + " A_mu=" + fmt_g(c_.A_mu) + " A_gamma=" + fmt_g(c_.A_gamma);
  }
  s += " mean_f=" + fmt_g(mean_f_) + " mean_g=" + fmt_g(mean_g_);
  if (n2b_ == N2bLeading::fbar) s += " n2b_leading=fbar";
  return s;
}

std::string StokesRhs::describe() const {
  return "rho=" + fmt_g(c_.rho) + " mu=" + fmt_g(c_.mu) +
         " zeta=" + std::to_string(c_.zeta) + " mean_f=" + fmt_g(mean_f_) +
         " mean_g=" + fmt_g(mean_g_);
}

NumericalFailure::NumericalFailure(double t_, long long step_)
    : std::runtime_error("non-finite coefficient at t=" + fmt_g(t_) + ", step " +
                         std::to_string(step_)),
      t(t_),
      step(step_) {}

Propagators precompute_propagators(const std::vector<Mat2>& L, double dt,
                                   StepperScheme scheme) {
  if (scheme == StepperScheme::rk4_explicit)
    throw std::invalid_argument("propagators: explicit scheme has no implicit solve");
  if (!(dt > 0.0)) throw std::invalid_argument("propagators: dt must be > 0");

  Propagators p;
  p.scheme = scheme;
  p.dt = dt;
  const double a = (scheme == StepperScheme::imex_be) ? dt : 0.5 * dt;
  const std::size_t n = L.size();
  p.forward.resize(n);
  p.inverse.resize(n);
  p.explicit_part.resize(n);
  p.advance.resize(n);
  p.use_pivot.assign(n, 0);

  for (std::size_t k = 0; k < n; ++k) {
    const Mat2 fwd = L[k].scaled(-a).plus_identity();
    const Mat2 exp_part = (scheme == StepperScheme::imex_be)
                              ? Mat2::identity()
                              : L[k].scaled(a).plus_identity();
    p.forward[k] = fwd;
    p.explicit_part[k] = exp_part;
    const Mat2 inv = inverse(fwd);
    const double cond = fwd.frobenius() * inv.frobenius();
    if (!std::isfinite(cond) || cond > 1e12) {
      p.use_pivot[k] = 1;
      p.ill_conditioned.push_back(static_cast<int>(k));
    }
    p.inverse[k] = inv;
    p.advance[k] = inv * exp_part;
  }
  return p;
}

Stepper::Stepper(const StepperConfig& cfg, const ModelRhs& rhs)
    : cfg_(cfg), rhs_(rhs), prev_nf_(cfg.K), prev_ng_(cfg.K) {
  cfg_.validate();
  if (cfg_.scheme != StepperScheme::rk4_explicit) {
    std::vector<Mat2> L(static_cast<std::size_t>(cfg_.K) + 1);
    for (int k = 0; k <= cfg_.K; ++k) L[static_cast<std::size_t>(k)] = rhs_.linear_symbol(k);
    props_ = precompute_propagators(L, cfg_.dt, cfg_.scheme);
  }
}

void Stepper::reset_history() {
  have_prev_ = false;
  prev_nf_ = TrigPoly(cfg_.K);
  prev_ng_ = TrigPoly(cfg_.K);
}

std::pair<TrigPoly, TrigPoly> Stepper::eval_nonlinear(const SimState& s) {
  if (cfg_.linear_only) return {TrigPoly(cfg_.K), TrigPoly(cfg_.K)};
  auto n = rhs_.nonlinear(s);
  const double e0 = wiener_norm(s.fbar, 0.0) + wiener_norm(s.gbar, 0.0);
  if (e0 > 0.0) {
    last_ratio_ =
        cfg_.dt * (wiener_norm(n.first, 0.0) + wiener_norm(n.second, 0.0)) / e0;
  }
  return n;
}

SimState Stepper::apply_imex(const SimState& s, const TrigPoly& inc_f,
                             const TrigPoly& inc_g) const {
  std::vector<Complex> cf(s.fbar.half());
  std::vector<Complex> cg(s.gbar.half());
  for (int k = 1; k <= cfg_.K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    Complex f = cf[ku];
    Complex g = cg[ku];
    apply(props_.explicit_part[ku], f, g);
    f += inc_f.coeff(k);
    g += inc_g.coeff(k);
    if (props_.use_pivot[ku]) {
      solve_pivoted(props_.forward[ku], f, g);
    } else {
      apply(props_.inverse[ku], f, g);
    }
    cf[ku] = f;
    cg[ku] = g;
  }
  SimState out = s;
  out.fbar = TrigPoly::from_half(std::move(cf));
  out.gbar = TrigPoly::from_half(std::move(cg));
  return out;
}

SimState Stepper::rk4(const SimState& s) const {
  const int K = cfg_.K;
  // F(u) = L u + N(u), evaluated on half-spectrum vectors.
  auto deriv = [&](const SimState& u) {
    std::vector<Complex> df(static_cast<std::size_t>(K) + 1, Complex{0.0, 0.0});
    std::vector<Complex> dg(static_cast<std::size_t>(K) + 1, Complex{0.0, 0.0});
    if (!cfg_.linear_only) {
      auto n = rhs_.nonlinear(u);
      for (int k = 1; k <= K; ++k) {
        df[static_cast<std::size_t>(k)] = n.first.coeff(k);
        dg[static_cast<std::size_t>(k)] = n.second.coeff(k);
      }
    }
    for (int k = 1; k <= K; ++k) {
      Complex f = u.fbar.coeff(k);
      Complex g = u.gbar.coeff(k);
      apply(rhs_.linear_symbol(k), f, g);
      df[static_cast<std::size_t>(k)] += f;
      dg[static_cast<std::size_t>(k)] += g;
    }
    return std::make_pair(std::move(df), std::move(dg));
  };
  auto shifted = [&](const std::vector<Complex>& kf, const std::vector<Complex>& kg,
                     double c) {
    SimState u = s;
    std::vector<Complex> cf(s.fbar.half());
    std::vector<Complex> cg(s.gbar.half());
    for (int k = 1; k <= K; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      cf[ku] += c * kf[ku];
      cg[ku] += c * kg[ku];
    }
    u.fbar = TrigPoly::from_half(std::move(cf));
    u.gbar = TrigPoly::from_half(std::move(cg));
    return u;
  };

  const double dt = cfg_.dt;
  auto [k1f, k1g] = deriv(s);
  auto [k2f, k2g] = deriv(shifted(k1f, k1g, 0.5 * dt));
  auto [k3f, k3g] = deriv(shifted(k2f, k2g, 0.5 * dt));
  auto [k4f, k4g] = deriv(shifted(k3f, k3g, dt));

  std::vector<Complex> cf(s.fbar.half());
  std::vector<Complex> cg(s.gbar.half());
  for (int k = 1; k <= K; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    cf[ku] += (dt / 6.0) * (k1f[ku] + 2.0 * k2f[ku] + 2.0 * k3f[ku] + k4f[ku]);
    cg[ku] += (dt / 6.0) * (k1g[ku] + 2.0 * k2g[ku] + 2.0 * k3g[ku] + k4g[ku]);
  }
  SimState out = s;
  out.fbar = TrigPoly::from_half(std::move(cf));
  out.gbar = TrigPoly::from_half(std::move(cg));
  return out;
}

void Stepper::check_finite(const SimState& s, double t_next) const {
  for (int k = 0; k <= cfg_.K; ++k) {
    const Complex f = s.fbar.coeff(k);
    const Complex g = s.gbar.coeff(k);
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag()) ||
        !std::isfinite(g.real()) || !std::isfinite(g.imag()))
      throw NumericalFailure(t_next, steps_taken_ + 1);
  }
}

SimState Stepper::step(const SimState& s) {
  if (s.K() != cfg_.K)
    throw std::invalid_argument("stepper: state bandwidth does not match config");
  SimState out = s;
  switch (cfg_.scheme) {
    case StepperScheme::rk4_explicit:
      out = rk4(s);
      break;
    case StepperScheme::imex_be: {
      auto [nf, ng] = eval_nonlinear(s);
      out = apply_imex(s, cfg_.dt * nf, cfg_.dt * ng);
      break;
    }
    case StepperScheme::imex_cn_ab2: {
      auto [nf, ng] = eval_nonlinear(s);
      TrigPoly inc_f(cfg_.K), inc_g(cfg_.K);
      if (have_prev_) {
        inc_f = (1.5 * cfg_.dt) * nf + (-0.5 * cfg_.dt) * prev_nf_;
        inc_g = (1.5 * cfg_.dt) * ng + (-0.5 * cfg_.dt) * prev_ng_;
      } else {
        inc_f = cfg_.dt * nf;
        inc_g = cfg_.dt * ng;
      }
      out = apply_imex(s, inc_f, inc_g);
      prev_nf_ = std::move(nf);
      prev_ng_ = std::move(ng);
      have_prev_ = true;
      break;
    }
  }
  out.t = s.t + cfg_.dt;
  check_finite(out, out.t);
  ++steps_taken_;
  return out;
}

IntegrateResult integrate(const SimState& s0, const StepperConfig& cfg,
                          const ModelRhs& rhs, const DiagnosticsConfig& diag,
                          const std::function<void(const std::string&)>& warn,
                          const std::function<void(const SimState&, long long)>& observer) {
  cfg.validate();
  s0.validate();
  const auto [mf, mg] = rhs.means();
  if (s0.mean_f != mf || s0.mean_g != mg)
    throw std::invalid_argument("integrate: state means do not match the model's");

  SimState state = s0;
  if (state.K() != cfg.K) {
    state.fbar = project(state.fbar, cfg.K);
    state.gbar = project(state.gbar, cfg.K);
  }
  const double t0 = state.t;

  Stepper stepper(cfg, rhs);

  IntegrateResult result{state, DiagnosticsSeries{}};
  auto& series = result.series;
  series.config = diag;
  series.meta.model = rhs.model_name();
  series.meta.scheme = to_string(cfg.scheme);
  series.meta.dt = cfg.dt;
  series.meta.K = cfg.K;
  series.meta.constants = rhs.describe();

  const long long n_steps = std::llround(cfg.t_end / cfg.dt);

  auto take_sample = [&](const SimState& s, long long i) {
    series.samples.push_back(sample(s, diag));
    if (observer) observer(s, i);
  };

  take_sample(state, 0);
  bool warned = false;
  for (long long i = 1; i <= n_steps; ++i) {
    state = stepper.step(state);
    state.t = t0 + static_cast<double>(i) * cfg.dt;
    if (!warned && stepper.last_nonlinear_ratio() > 0.1) {
      warned = true;
      if (warn)
        warn("nonlinear increment exceeds 10% of the state per step (ratio " +
             std::to_string(stepper.last_nonlinear_ratio()) +
             " at t=" + std::to_string(state.t) + "); decrease dt");
    }
    if (i % cfg.sample_every == 0 || i == n_steps) take_sample(state, i);
  }
  result.state = state;
  return result;
}

}  // namespace thinfilm
