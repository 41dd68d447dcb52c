#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "thinfilm/certificates.hpp"
#include "thinfilm/diagnostics.hpp"
#include "thinfilm/muskat.hpp"
#include "thinfilm/norms.hpp"
#include "thinfilm/rng.hpp"
#include "thinfilm/sim_state.hpp"
#include "thinfilm/stepper.hpp"
#include "thinfilm/stokes.hpp"

using namespace thinfilm;

namespace {

// Reduced constants of the running example: equal viscosities, density
// ratio 2, both surface-tension coefficients 1, unit gravity.
MuskatConstants example_muskat() {
  MuskatConstants c;
  c.b = 1.0;
  c.b_mu = 1.0;
  c.b_rho = 2.0;
  c.A = 1.0;
  c.A_mu = 1.0;
  c.A_gamma = 2.0;
  c.variant = MuskatVariant::capillary;
  return c;
}

StokesConstants example_stokes() {
  StokesConstants c;
  c.rho = 10.0;
  c.mu = 30.0;
  c.zeta = 3;
  return c;
}

SimState single_mode(double amp, int K, double mean_f = 1.0, double mean_g = 1.5) {
  SimState s;
  s.fbar = project(TrigPoly::cosine(1, amp), K);
  s.gbar = TrigPoly(K);
  s.mean_f = mean_f;
  s.mean_g = mean_g;
  return s;
}

// Arbitrary linear dynamics for propagator-focused tests.
class LinearRhs final : public ModelRhs {
 public:
  explicit LinearRhs(std::function<Mat2(int)> sym) : sym_(std::move(sym)) {}
  Mat2 linear_symbol(int k) const override { return sym_(k); }
  std::pair<TrigPoly, TrigPoly> nonlinear(const SimState& s) const override {
    return {TrigPoly(s.K()), TrigPoly(s.K())};
  }
  std::pair<double, double> means() const override { return {1.0, 1.5}; }
  std::string model_name() const override { return "linear_test"; }
  std::string describe() const override { return "synthetic linear block"; }

 private:
  std::function<Mat2(int)> sym_;
};

// Injects a non-finite nonlinear increment to exercise the failure path.
class PoisonRhs final : public ModelRhs {
 public:
  Mat2 linear_symbol(int) const override { return Mat2{}; }
  std::pair<TrigPoly, TrigPoly> nonlinear(const SimState& s) const override {
    TrigPoly n(s.K());
    n.set_coeff(1, Complex{std::nan(""), 0.0});
    return {n, TrigPoly(s.K())};
  }
  std::pair<double, double> means() const override { return {1.0, 1.5}; }
  std::string model_name() const override { return "poison_test"; }
  std::string describe() const override { return ""; }
};

double state_diff(const SimState& a, const SimState& b) {
  double m = 0.0;
  const int K = std::max(a.K(), b.K());
  for (int k = 0; k <= K; ++k) {
    m = std::max(m, std::abs(a.fbar.coeff(k) - b.fbar.coeff(k)));
    m = std::max(m, std::abs(a.gbar.coeff(k) - b.gbar.coeff(k)));
  }
  return m;
}

bool states_identical(const SimState& a, const SimState& b) {
  if (a.K() != b.K()) return false;
  for (int k = 0; k <= a.K(); ++k) {
    if (a.fbar.coeff(k) != b.fbar.coeff(k)) return false;
    if (a.gbar.coeff(k) != b.gbar.coeff(k)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("propagator precomputation") {
  const Mat2 L1{-4.0, -2.0, -3.0, -3.0};
  const std::vector<Mat2> L = {Mat2{}, L1};

  SUBCASE("fully implicit scheme, frozen example") {
    const Propagators p = precompute_propagators(L, 0.1, StepperScheme::imex_be);
    CHECK(p.forward[1].a11 == doctest::Approx(1.4).epsilon(1e-15));
    CHECK(p.forward[1].a12 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p.forward[1].a21 == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(p.forward[1].a22 == doctest::Approx(1.3).epsilon(1e-15));
    // Inverse of [[1.4, 0.2], [0.3, 1.3]] has determinant 1.76.
    CHECK(p.inverse[1].a11 == doctest::Approx(1.3 / 1.76).epsilon(1e-15));
    CHECK(p.inverse[1].a12 == doctest::Approx(-0.2 / 1.76).epsilon(1e-15));
    CHECK(p.inverse[1].a21 == doctest::Approx(-0.3 / 1.76).epsilon(1e-15));
    CHECK(p.inverse[1].a22 == doctest::Approx(1.4 / 1.76).epsilon(1e-15));
    // The explicit part is the identity, so advance coincides with inverse.
    CHECK(p.advance[1].a11 == p.inverse[1].a11);
    CHECK(p.advance[1].a12 == p.inverse[1].a12);
    CHECK(p.ill_conditioned.empty());
  }

  SUBCASE("trapezoidal scheme splits dt symmetrically") {
    const Propagators p = precompute_propagators(L, 0.1, StepperScheme::imex_cn_ab2);
    CHECK(p.forward[1].a11 == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(p.forward[1].a22 == doctest::Approx(1.15).epsilon(1e-15));
    CHECK(p.explicit_part[1].a11 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(p.explicit_part[1].a12 == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(p.explicit_part[1].a21 == doctest::Approx(-0.15).epsilon(1e-15));
    CHECK(p.explicit_part[1].a22 == doctest::Approx(0.85).epsilon(1e-15));
  }

  SUBCASE("wavenumber zero is the identity") {
    for (auto scheme : {StepperScheme::imex_be, StepperScheme::imex_cn_ab2}) {
      const Propagators p = precompute_propagators(L, 0.1, scheme);
      CHECK(p.forward[0].a11 == 1.0);
      CHECK(p.forward[0].a12 == 0.0);
      CHECK(p.advance[0].a11 == 1.0);
      CHECK(p.advance[0].a22 == 1.0);
      CHECK(p.use_pivot[0] == 0);
    }
  }

  SUBCASE("vanishing dt gives the identity propagator") {
    const Propagators p = precompute_propagators(L, 1e-13, StepperScheme::imex_be);
    CHECK(p.advance[1].a11 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.advance[1].a12 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.advance[1].a21 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.advance[1].a22 == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("near-singular modes are flagged for pivoted solves") {
    const double dt = 0.25;
    // Forward matrix [[1e-13, 0], [0, 1 + dt]]: condition estimate ~ 1e13.
    const Mat2 bad{(1.0 - 1e-13) / dt, 0.0, 0.0, -1.0};
    const Propagators p =
        precompute_propagators({Mat2{}, bad}, dt, StepperScheme::imex_be);
    REQUIRE(p.ill_conditioned.size() == 1);
    CHECK(p.ill_conditioned[0] == 1);
    CHECK(p.use_pivot[1] == 1);
    CHECK(p.use_pivot[0] == 0);

    // The stepper still advances, through the pivoted path, to finite values.
    LinearRhs rhs([&](int k) { return k == 1 ? bad : Mat2{}; });
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.K = 1;
    cfg.scheme = StepperScheme::imex_be;
    cfg.linear_only = true;
    Stepper st(cfg, rhs);
    const SimState out = st.step(single_mode(0.01, 1));
    CHECK(std::isfinite(out.fbar.coeff(1).real()));
    CHECK(std::abs(out.fbar.coeff(1)) > 1e7);  // the nearly singular solve blows up
  }

  SUBCASE("preconditions") {
    CHECK_THROWS_AS(precompute_propagators(L, 0.1, StepperScheme::rk4_explicit),
                    std::invalid_argument);
    CHECK_THROWS_AS(precompute_propagators(L, 0.0, StepperScheme::imex_be),
                    std::invalid_argument);
  }
}

TEST_CASE("fully implicit linear step reproduces the frozen propagator arithmetic") {
  // The capillary example at means (1, 1.5) has the linear block
  // [[-4, -2], [-3, -3]] at wavenumber 1, matching the frozen numbers above.
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);
  StepperConfig cfg;
  cfg.dt = 0.1;
  cfg.K = 1;
  cfg.scheme = StepperScheme::imex_be;
  cfg.linear_only = true;
  Stepper st(cfg, rhs);
  const SimState out = st.step(single_mode(0.01, 1));
  CHECK(out.fbar.coeff(1).real() == doctest::Approx(1.3 * 0.005 / 1.76).epsilon(1e-15));
  CHECK(out.gbar.coeff(1).real() == doctest::Approx(-0.3 * 0.005 / 1.76).epsilon(1e-15));
  CHECK(out.fbar.coeff(1).imag() == 0.0);
  CHECK(out.t == doctest::Approx(0.1));
}

TEST_CASE("implicit linear steps converge to the exact exponential flow") {
  // k-dependent stable blocks on two modes.
  auto sym = [](int k) {
    const double s = static_cast<double>(k * k);
    return Mat2{-4.0 * s, -2.0 * s, -3.0 * s, -3.0 * s};
  };
  LinearRhs rhs(sym);
  SimState s0;
  s0.fbar = TrigPoly::from_half({{0, 0}, {0.004, -0.002}, {0.001, 0.003}});
  s0.gbar = TrigPoly::from_half({{0, 0}, {-0.002, 0.001}, {0.002, -0.001}});
  s0.mean_f = 1.0;
  s0.mean_g = 1.5;

  auto one_step_error = [&](StepperScheme scheme, double dt) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.K = 2;
    cfg.scheme = scheme;
    cfg.linear_only = true;
    Stepper st(cfg, rhs);
    const SimState out = st.step(s0);
    double err = 0.0;
    for (int k = 1; k <= 2; ++k) {
      const auto e = oracles::expm(sym(k), dt);
      auto [ef, eg] = oracles::apply_lmat(e, s0.fbar.coeff(k), s0.gbar.coeff(k));
      err = std::max(err, std::abs(out.fbar.coeff(k) - ef));
      err = std::max(err, std::abs(out.gbar.coeff(k) - eg));
    }
    return err;
  };

  SUBCASE("local error orders: third for trapezoidal, second for fully implicit") {
    const double e1 = one_step_error(StepperScheme::imex_cn_ab2, 1e-2);
    const double e2 = one_step_error(StepperScheme::imex_cn_ab2, 5e-3);
    CHECK(e1 / e2 == doctest::Approx(8.0).epsilon(0.15));
    const double b1 = one_step_error(StepperScheme::imex_be, 1e-2);
    const double b2 = one_step_error(StepperScheme::imex_be, 5e-3);
    CHECK(b1 / b2 == doctest::Approx(4.0).epsilon(0.15));
  }

  SUBCASE("whole-horizon trapezoidal flow stays within a second-order envelope") {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 2;
    cfg.t_end = 1.0;
    cfg.scheme = StepperScheme::imex_cn_ab2;
    cfg.linear_only = true;
    LinearRhs local(sym);
    const IntegrateResult r = integrate(s0, cfg, local);
    double err = 0.0;
    for (int k = 1; k <= 2; ++k) {
      const auto e = oracles::expm(sym(k), 1.0);
      auto [ef, eg] = oracles::apply_lmat(e, s0.fbar.coeff(k), s0.gbar.coeff(k));
      err = std::max(err, std::abs(r.state.fbar.coeff(k) - ef));
      err = std::max(err, std::abs(r.state.gbar.coeff(k) - eg));
    }
    CHECK(err < 1e-6);
  }
}

TEST_CASE("self-convergence orders on the full nonlinear flow") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);
  auto final_state = [&](StepperScheme scheme, double dt) {
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.K = 8;
    cfg.t_end = 0.1;
    cfg.scheme = scheme;
    const SimState s0 = single_mode(0.01, 8);
    return integrate(s0, cfg, rhs).state;
  };
  auto order = [&](StepperScheme scheme) {
    const SimState a = final_state(scheme, 4e-3);
    const SimState b = final_state(scheme, 2e-3);
    const SimState c = final_state(scheme, 1e-3);
    return std::log2(state_diff(a, b) / state_diff(b, c));
  };

  const double cn = order(StepperScheme::imex_cn_ab2);
  CHECK(cn > 1.7);
  CHECK(cn < 2.3);
  const double be = order(StepperScheme::imex_be);
  CHECK(be > 0.8);
  CHECK(be < 1.2);
}

TEST_CASE("explicit fourth-order scheme agrees with the default one at tiny dt") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);
  StepperConfig cfg;
  cfg.dt = 1e-5;
  cfg.K = 8;
  cfg.t_end = 0.01;
  const SimState s0 = single_mode(0.01, 8);
  cfg.scheme = StepperScheme::imex_cn_ab2;
  const SimState a = integrate(s0, cfg, rhs).state;
  cfg.scheme = StepperScheme::rk4_explicit;
  const SimState b = integrate(s0, cfg, rhs).state;
  CHECK(state_diff(a, b) < 1e-8);
  CHECK(state_diff(a, b) > 0.0);  // the schemes genuinely differ
}

TEST_CASE("stopping and restarting reproduces the single uninterrupted run") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);
  // Bandwidth 4 keeps dt * |L| inside the explicit scheme's stability region.
  const SimState s0 = single_mode(0.01, 4);

  auto run = [&](StepperScheme scheme, const SimState& from, double horizon) {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 4;
    cfg.t_end = horizon;
    cfg.scheme = scheme;
    return integrate(from, cfg, rhs).state;
  };

  SUBCASE("single-step schemes restart bit-for-bit") {
    for (auto scheme : {StepperScheme::imex_be, StepperScheme::rk4_explicit}) {
      const SimState half = run(scheme, s0, 0.1);
      const SimState resumed = run(scheme, half, 0.1);
      const SimState whole = run(scheme, s0, 0.2);
      CHECK(states_identical(resumed, whole));
      CHECK(resumed.t == doctest::Approx(0.2).epsilon(1e-14));
    }
  }

  SUBCASE("the two-step scheme restarts through its bootstrap, to scheme accuracy") {
    // Restarting replays the explicit-Euler bootstrap, so equality holds to
    // the local truncation error rather than bitwise.
    const SimState half = run(StepperScheme::imex_cn_ab2, s0, 0.1);
    const SimState resumed = run(StepperScheme::imex_cn_ab2, half, 0.1);
    const SimState whole = run(StepperScheme::imex_cn_ab2, s0, 0.2);
    CHECK(state_diff(resumed, whole) < 1e-9);
    CHECK(state_diff(resumed, whole) > 0.0);
  }
}

TEST_CASE("conserved quantities and sampling cadence of integrate") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);

  SUBCASE("the zero mode never moves") {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 8;
    cfg.t_end = 0.05;
    const IntegrateResult r = integrate(single_mode(0.02, 8), cfg, rhs);
    CHECK(r.state.fbar.coeff(0) == Complex{0.0, 0.0});
    CHECK(r.state.gbar.coeff(0) == Complex{0.0, 0.0});
    CHECK(r.state.mean_f == 1.0);
    CHECK(r.state.mean_g == 1.5);
    for (const auto& s : r.series.samples) {
      CHECK(s.mass_f == 0.0);
      CHECK(s.mass_g == 0.0);
    }
  }

  SUBCASE("sample counts follow the cadence, with a forced final sample") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.K = 4;
    cfg.t_end = 1.0;  // 100 steps
    cfg.sample_every = 7;
    const IntegrateResult r = integrate(single_mode(0.01, 4), cfg, rhs);
    // Steps 0, 7, ..., 98, plus the forced final step 100.
    CHECK(r.series.samples.size() == 16);
    CHECK(r.series.samples.front().t == 0.0);
    CHECK(r.series.samples.back().t == doctest::Approx(1.0).epsilon(1e-14));
    cfg.sample_every = 14;
    const IntegrateResult r2 = integrate(single_mode(0.01, 4), cfg, rhs);
    CHECK(r2.series.samples.size() == 9);
  }

  SUBCASE("zero horizon takes the initial sample only") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.K = 4;
    cfg.t_end = 0.0;
    const IntegrateResult r = integrate(single_mode(0.01, 4), cfg, rhs);
    CHECK(r.series.samples.size() == 1);
    CHECK(r.state.t == 0.0);
  }

  SUBCASE("the time grid is the exact product grid") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.K = 4;
    cfg.t_end = 0.1;
    const IntegrateResult r = integrate(single_mode(0.01, 4), cfg, rhs);
    REQUIRE(r.series.samples.size() == 11);
    for (int i = 0; i <= 10; ++i) {
      CHECK(r.series.samples[static_cast<size_t>(i)].t ==
            static_cast<double>(i) * 0.01);
    }
  }

  SUBCASE("metadata describes the run") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.K = 4;
    cfg.t_end = 0.0;
    const IntegrateResult r = integrate(single_mode(0.01, 4), cfg, rhs);
    CHECK(r.series.meta.model == "muskat_capillary");
    CHECK(r.series.meta.scheme == "imex_cn_ab2");
    CHECK(r.series.meta.dt == 0.01);
    CHECK(r.series.meta.K == 4);
    CHECK(r.series.meta.constants.find("b_rho=2") != std::string::npos);
  }

  SUBCASE("observer sees every sampled step") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.K = 4;
    cfg.t_end = 0.05;
    cfg.sample_every = 2;
    std::vector<long long> seen;
    integrate(single_mode(0.01, 4), cfg, rhs, {}, {},
              [&](const SimState&, long long i) { seen.push_back(i); });
    CHECK(seen == std::vector<long long>{0, 2, 4, 5});
  }
}

TEST_CASE("bandwidth adaptation and input guards of integrate") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);

  SUBCASE("initial data of a different bandwidth is projected to the config") {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 8;
    cfg.t_end = 0.02;
    cfg.linear_only = true;
    const SimState narrow = single_mode(0.01, 4);
    const IntegrateResult wide = integrate(narrow, cfg, rhs);
    CHECK(wide.state.K() == 8);
    // Linear dynamics are diagonal in wavenumber, so zero-padding changes
    // nothing on the shared modes.
    cfg.K = 4;
    const IntegrateResult kept = integrate(narrow, cfg, rhs);
    for (int k = 0; k <= 4; ++k) {
      CHECK(wide.state.fbar.coeff(k) == kept.state.fbar.coeff(k));
      CHECK(wide.state.gbar.coeff(k) == kept.state.gbar.coeff(k));
    }
    for (int k = 5; k <= 8; ++k) CHECK(wide.state.fbar.coeff(k) == Complex{0.0, 0.0});
  }

  SUBCASE("means must match the model") {
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 4;
    SimState s0 = single_mode(0.01, 4);
    s0.mean_f = 1.1;
    CHECK_THROWS_AS(integrate(s0, cfg, rhs), std::invalid_argument);
  }

  SUBCASE("config validation") {
    StepperConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.dt = 1e-3;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.t_end = 1.0;
    cfg.K = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.K = 4;
    cfg.sample_every = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
}

TEST_CASE("non-finite coefficients abort with a numerical failure") {
  PoisonRhs rhs;
  StepperConfig cfg;
  cfg.dt = 0.5;
  cfg.K = 2;
  cfg.t_end = 1.0;
  cfg.scheme = StepperScheme::imex_be;
  SimState s0 = single_mode(0.01, 2);
  try {
    integrate(s0, cfg, rhs);
    FAIL("expected a numerical failure");
  } catch (const NumericalFailure& e) {
    CHECK(e.t == doctest::Approx(0.5));
    CHECK(e.step == 1);
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("oversized nonlinear increments trigger a single warning") {
  MuskatRhs rhs(example_muskat(), 1.0, 1.5);
  StepperConfig cfg;
  cfg.dt = 0.5;
  cfg.K = 4;
  cfg.t_end = 1.0;  // two steps, both with a ratio above the threshold
  cfg.scheme = StepperScheme::imex_be;
  std::vector<std::string> warnings;
  integrate(single_mode(0.1, 4), cfg, rhs,
            {}, [&](const std::string& m) { warnings.push_back(m); });
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("decrease dt") != std::string::npos);

  // A resolved run stays silent.
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  warnings.clear();
  integrate(single_mode(0.01, 4), cfg, rhs,
            {}, [&](const std::string& m) { warnings.push_back(m); });
  CHECK(warnings.empty());
}

TEST_CASE("hypothesis-passing constants make the implicit update a coefficient-sum contraction") {
  // The four sigma margins at vanishing perturbation are exactly per-mode
  // column dominance of the implicit solve: sigma_{1,*} > 0 bounds the first
  // column sum of the inverse by one, sigma_{2,*} > 0 the second.  So for
  // any dt the fully implicit linear update cannot increase |f_hat| + |g_hat|
  // on any mode, hence not the summed coefficient norm either.
  Rng rng(20240817);
  int tested = 0;
  double worst_col = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double F = rng.uniform(0.3, 2.0);
    const double G = rng.uniform(0.3, 2.0);
    MuskatConstants c;
    c.b = rng.uniform(0.2, 2.0);
    c.b_rho = c.b * rng.uniform(1.05, 3.0);
    c.A = rng.uniform(0.2, 2.0);
    c.A_gamma = c.A * rng.uniform(1.05, 3.0);
    // Place G*A_mu strictly inside (F*A, F*A_gamma), and likewise for b.
    c.A_mu = F * rng.uniform(c.A * 1.01, c.A_gamma * 0.99) / G;
    c.b_mu = F * rng.uniform(c.b * 1.01, c.b_rho * 0.99) / G;
    c.variant = MuskatVariant::capillary;

    const MuskatSigmas sg = muskat_sigmas(c, F, G, 0.0);
    REQUIRE(sg.sigma1_A > 0.0);
    REQUIRE(sg.sigma2_A > 0.0);
    REQUIRE(sg.sigma1_b > 0.0);
    REQUIRE(sg.sigma2_b > 0.0);

    const double dt = std::pow(10.0, rng.uniform(-6.0, 3.0));
    const int K = rng.uniform_int(1, 12);
    std::vector<Mat2> L(static_cast<size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) L[static_cast<size_t>(k)] = linear_symbol(k, c, F, G);
    const Propagators p = precompute_propagators(L, dt, StepperScheme::imex_be);
    for (int k = 1; k <= K; ++k) {
      const Mat2& m = p.inverse[static_cast<size_t>(k)];
      const double col1 = std::abs(m.a11) + std::abs(m.a21);
      const double col2 = std::abs(m.a12) + std::abs(m.a22);
      worst_col = std::max({worst_col, col1, col2});
    }

    // And on a random state the summed norm indeed never grows.
    LinearRhs rhs([&](int k) { return linear_symbol(k, c, F, G); });
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.K = K;
    cfg.scheme = StepperScheme::imex_be;
    cfg.linear_only = true;
    SimState s;
    s.fbar = rng.random_decay_poly(K, 0.05, 1.5);
    s.gbar = rng.random_decay_poly(K, 0.05, 1.5);
    s.mean_f = 1.0;
    s.mean_g = 1.5;
    Stepper st(cfg, rhs);
    const SimState out = st.step(s);
    const double before = wiener_norm(s.fbar, 0.0) + wiener_norm(s.gbar, 0.0);
    const double after = wiener_norm(out.fbar, 0.0) + wiener_norm(out.gbar, 0.0);
    CHECK(after <= before * (1.0 + 1e-12));
    ++tested;
  }
  CHECK(tested == 200);
  CHECK(worst_col <= 1.0 + 1e-12);

  // The viscous-bilayer example constants contract the same way.
  const StokesCoeffMatrix C = coeff_matrix(example_stokes(), 1.0, 0.3);
  for (double dt : {1e-4, 1e-1, 1e2}) {
    std::vector<Mat2> L(33);
    for (int k = 0; k <= 32; ++k) L[static_cast<size_t>(k)] = linear_symbol(k, C, 3);
    const Propagators p = precompute_propagators(L, dt, StepperScheme::imex_be);
    for (int k = 1; k <= 32; ++k) {
      const Mat2& m = p.inverse[static_cast<size_t>(k)];
      CHECK(std::abs(m.a11) + std::abs(m.a21) <= 1.0 + 1e-12);
      CHECK(std::abs(m.a12) + std::abs(m.a22) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("viscous-bilayer trajectories integrate stably at both dissipation orders") {
  for (int zeta : {1, 3}) {
    StokesConstants c = example_stokes();
    c.zeta = zeta;
    StokesRhs rhs(c, 1.0, 0.3);
    StepperConfig cfg;
    cfg.dt = 1e-3;
    cfg.K = 8;
    cfg.t_end = 0.2;
    const IntegrateResult r = integrate(single_mode(2e-4, 8, 1.0, 0.3), cfg, rhs);
    CHECK(r.state.fbar.coeff(0) == Complex{0.0, 0.0});
    const double e_start = r.series.samples.front().e_wiener_0;
    const double e_end = r.series.samples.back().e_wiener_0;
    CHECK(e_end < e_start);
    CHECK(e_end > 0.0);
  }
}
