// Certificate-engine tests.  Every frozen number is re-derived by hand from
// the closed-form margin expressions (written out in the comments), so the
// implementation is checked against independent arithmetic, not itself.
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "thinfilm/certificates.hpp"
#include "thinfilm/rng.hpp"
#include "thinfilm/trig_poly.hpp"

using namespace thinfilm;

namespace {

// Reduced constants b=1, b_mu=1, b_rho=2, A=1, A_mu=1, A_gamma=2 (equal unit
// viscosities, density ratio 2, both surface tensions 1, unit gravity).
MuskatConstants example_constants(MuskatVariant v = MuskatVariant::capillary) {
  MuskatConstants c;
  c.b = 1.0;
  c.b_mu = 1.0;
  c.b_rho = 2.0;
  if (v == MuskatVariant::capillary) {
    c.A = 1.0;
    c.A_mu = 1.0;
    c.A_gamma = 2.0;
  }
  c.variant = v;
  return c;
}

StokesConstants stokes_example(int zeta = 3) {
  StokesConstants c;
  c.rho = 10.0;
  c.mu = 30.0;
  c.zeta = zeta;
  return c;
}

}  // namespace

TEST_CASE("porous-medium sigma margins") {
  const MuskatConstants c = example_constants();

  SUBCASE("frozen example at e0 = 0.01") {
    // sigma1_A = 1*2 - 1.5*1 - (1 + 4 + 2)*0.01      = 0.5 - 0.07 = 0.43
    // sigma2_A = 1.5*1 - 1*1 - 0.07                  = 0.43
    // sigma1_b = 1*2 - 1.5*1 - (4 + 2 + 4)*0.01      = 0.5 - 0.10 = 0.40
    // sigma2_b = 1.5*1 - 1*1 - 0.10                  = 0.40
    const MuskatSigmas s = muskat_sigmas(c, 1.0, 1.5, 0.01);
    CHECK(s.sigma1_A == doctest::Approx(0.43).epsilon(1e-12));
    CHECK(s.sigma2_A == doctest::Approx(0.43).epsilon(1e-12));
    CHECK(s.sigma1_b == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(s.sigma2_b == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(s.delta_A == std::min(s.sigma1_A, s.sigma2_A));
    CHECK(s.delta_b == std::min(s.sigma1_b, s.sigma2_b));
    CHECK(s.delta_A == doctest::Approx(0.43).epsilon(1e-12));
    CHECK(s.delta_b == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(s.sigma_A_applicable);
  }

  SUBCASE("zero-perturbation limit") {
    const MuskatSigmas s = muskat_sigmas(c, 1.0, 1.5, 0.0);
    CHECK(s.sigma1_A == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.sigma2_A == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.sigma1_b == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.sigma2_b == doctest::Approx(0.5).epsilon(1e-15));
  }

  SUBCASE("gravity variant marks the A-pair not applicable") {
    const MuskatSigmas s =
        muskat_sigmas(example_constants(MuskatVariant::gravity), 1.0, 1.5, 0.01);
    CHECK_FALSE(s.sigma_A_applicable);
    CHECK(s.sigma1_A == 0.0);
    CHECK(s.sigma2_A == 0.0);
    CHECK(s.delta_A == 0.0);
    CHECK(s.sigma1_b == doctest::Approx(0.40).epsilon(1e-12));
    CHECK(s.sigma2_b == doctest::Approx(0.40).epsilon(1e-12));
  }

  SUBCASE("a dense upper layer flips the margins negative") {
    // Swap the density ratio: b_rho = 0.5 < b = 1 makes sigma1_b negative at
    // any admissible means.
    MuskatConstants inverted = c;
    inverted.b_rho = 0.5;
    const MuskatSigmas s = muskat_sigmas(inverted, 1.0, 1.0, 0.0);
    CHECK(s.sigma1_b < 0.0);
  }

  CHECK_THROWS_AS(muskat_sigmas(c, 1.0, 1.5, -0.1), std::invalid_argument);
}

TEST_CASE("capillary higher-regularity margins, both conventions") {
  const MuskatConstants c = example_constants();

  SUBCASE("zero-perturbation values and convention agreement") {
    // first  = 1.5*1 - (1*1 + 1.5*1)/2 = 1.5 - 1.25 = 0.25
    // second = 1*2   - 1.25            = 0.75
    const auto [statement, proof] = muskat_thm3_margins(c, 1.0, 1.5, 0.0);
    CHECK(statement.first == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(statement.second == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(proof.first == statement.first);
    CHECK(proof.second == statement.second);
  }

  SUBCASE("frozen example at e0 = 0.01") {
    // Statement coefficient: A_gamma + (13/4)A + (17/4)A_mu = 2 + 3.25 + 4.25
    // = 9.5, so both margins drop by 0.095.
    const auto [statement, proof] = muskat_thm3_margins(c, 1.0, 1.5, 0.01);
    CHECK(statement.first == doctest::Approx(0.25 - 0.095).epsilon(1e-12));
    CHECK(statement.second == doctest::Approx(0.75 - 0.095).epsilon(1e-12));
    // Alternate coefficient: sqrt2*2 + 9/4 + (sqrt2 + 9/4) = 3 sqrt2 + 4.5.
    const double drop = (3.0 * std::sqrt(2.0) + 4.5) * 0.01;
    CHECK(proof.first == doctest::Approx(0.25 - drop).epsilon(1e-12));
    CHECK(proof.second == doctest::Approx(0.75 - drop).epsilon(1e-12));
    // The two conventions differ at positive e0.
    CHECK(statement.first != proof.first);
  }

  CHECK_THROWS_AS(muskat_thm3_margins(example_constants(MuskatVariant::gravity),
                                      1.0, 1.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("gravity higher-regularity margins") {
  const MuskatConstants c = example_constants(MuskatVariant::gravity);

  SUBCASE("zero-perturbation values") {
    // first  = 1*2 - (1.5*1 + 1*1)/2 = 2 - 1.25   = 0.75
    // second = 1.5*1 - 1.25          = 0.25
    const MarginPair m = muskat_thm4_margins(c, 1.0, 1.5, 0.0);
    CHECK(m.first == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(m.second == doctest::Approx(0.25).epsilon(1e-14));
  }

  SUBCASE("e0 coefficient is b_rho + b_mu + (5/2)(b_mu + b) = 8") {
    const MarginPair m = muskat_thm4_margins(c, 1.0, 1.5, 0.01);
    CHECK(m.first == doctest::Approx(0.75 - 0.08).epsilon(1e-12));
    CHECK(m.second == doctest::Approx(0.25 - 0.08).epsilon(1e-12));
  }

  CHECK_THROWS_AS(muskat_thm4_margins(example_constants(), 1.0, 1.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("bilayer Sigma margins") {
  SUBCASE("frozen example, means (1, 0.3), rho=10, mu=30, e0=0") {
    // Sigma1 = 2*10*1 + 3*0.3*(1-10) - (2*30*0.027 + 6*0.09)
    //        = 20 - 8.1 - 2.16 = 9.74
    // Sigma2 = 1.62 + 0.54 - 2 = 0.16
    const StokesSigmas s = stokes_Sigmas(stokes_example(), 1.0, 0.3, 0.0);
    CHECK(s.Sigma1 == doctest::Approx(9.74).epsilon(1e-12));
    CHECK(s.Sigma2 == doctest::Approx(0.16).epsilon(1e-12));
    CHECK(s.epsilon == doctest::Approx(0.16).epsilon(1e-12));
  }

  SUBCASE("symmetric means violate the first margin") {
    // F = G = 1, rho = 2, mu = 1: Sigma1 = 4 - 3 - 8 = -7, Sigma2 = 2+6-2 = 6.
    StokesConstants c;
    c.rho = 2.0;
    c.mu = 1.0;
    c.zeta = 3;
    const StokesSigmas s = stokes_Sigmas(c, 1.0, 1.0, 0.0);
    CHECK(s.Sigma1 == doctest::Approx(-7.0).epsilon(1e-12));
    CHECK(s.Sigma2 == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(s.epsilon == doctest::Approx(-7.0).epsilon(1e-12));
  }

  SUBCASE("frozen example at e0 = 2e-4") {
    // Correction brackets, hand-expanded:
    //   Sigma2: cubic bracket 14*30+15*10+83 = 653; linear-in-e0 bracket
    //   (30*30+60+84)*0.3 + (96+240)*1 = 313.2+336 = 649.2; constant bracket
    //   (540+18)*0.09 + (27+90)*1 + 126*0.3 = 50.22+117+37.8 = 205.02.
    //   Sigma2 = 0.16 - e0*(653 e0^2 + 649.2 e0) - e0*205.02
    const double e0 = 2e-4;
    const double sigma2 = 0.16 - e0 * (653.0 * e0 * e0 + 649.2 * e0) - e0 * 205.02;
    const StokesSigmas s = stokes_Sigmas(stokes_example(), 1.0, 0.3, e0);
    CHECK(s.Sigma2 == doctest::Approx(sigma2).epsilon(1e-12));
    CHECK(s.Sigma2 == doctest::Approx(0.118970026776).epsilon(1e-9));
    CHECK(s.Sigma2 > 0.0);
    CHECK(s.Sigma1 > 0.0);
    CHECK(s.epsilon == s.Sigma2);
  }

  SUBCASE("e0 = 0.01 overwhelms the second margin") {
    // The constant bracket alone contributes 0.01*205.02 = 2.05 > 0.16.
    const StokesSigmas s = stokes_Sigmas(stokes_example(), 1.0, 0.3, 0.01);
    CHECK(s.Sigma2 < 0.0);
  }
}

TEST_CASE("bilayer higher-regularity margins") {
  SUBCASE("frozen example, means (1, 0.3), rho=10, mu=30, e0=0") {
    // first  = 19 - (3/2)*9*0.3 - 3*0.09 - 30*0.027 = 19 - 4.05 - 0.27 - 0.81
    //        = 13.87
    // second = 0.81 + 0.27 - 4.05 - 1 = -3.97
    const StokesThm6 r = stokes_thm6_margins(stokes_example(), 1.0, 0.3, 0.0);
    CHECK(r.margins.first == doctest::Approx(13.87).epsilon(1e-12));
    CHECK(r.margins.second == doctest::Approx(-3.97).epsilon(1e-12));
    // C_3 at e0=0: (57/4 + 390/4) + 0.09*(27/2 + 225) + 0.3*(81/2 + 75)
    //            = 111.75 + 21.465 + 34.65 = 167.865
    CHECK(r.C_zeta == doctest::Approx(167.865).epsilon(1e-12));
  }

  SUBCASE("order-1 constant at the same inputs") {
    // C_1 at e0=0: ((15+90) + 0.09*(12+360) + 0.3*(42+60))/2
    //            = (105 + 33.48 + 30.6)/2 = 84.54
    const StokesThm6 r = stokes_thm6_margins(stokes_example(1), 1.0, 0.3, 0.0);
    CHECK(r.C_zeta == doctest::Approx(84.54).epsilon(1e-12));
    // At e0 = 0 the margins do not see C_zeta: both orders agree.
    const StokesThm6 r3 = stokes_thm6_margins(stokes_example(3), 1.0, 0.3, 0.0);
    CHECK(r.margins.first == doctest::Approx(r3.margins.first).epsilon(1e-14));
    CHECK(r.margins.second == doctest::Approx(r3.margins.second).epsilon(1e-14));
    // At e0 > 0 they differ by exactly e0 * (C_3 - C_1).
    const double e0 = 0.05;
    const StokesThm6 a = stokes_thm6_margins(stokes_example(1), 1.0, 0.3, e0);
    const StokesThm6 b = stokes_thm6_margins(stokes_example(3), 1.0, 0.3, e0);
    CHECK(a.margins.first - b.margins.first ==
          doctest::Approx(e0 * (b.C_zeta - a.C_zeta)).epsilon(1e-12));
  }

  StokesConstants bad = stokes_example();
  bad.zeta = 2;
  CHECK_THROWS_AS(stokes_thm6_margins(bad, 1.0, 0.3, 0.0), std::invalid_argument);
}

TEST_CASE("report composition for the porous-medium example state") {
  // fbar = 0.005 e^{ix} + 0.005 e^{-ix} = 0.01 cos x, so e0 = 0.01.
  SimState s;
  s.fbar = TrigPoly::from_two_sided(
      4, {{1, Complex{0.005, 0.0}}, {-1, Complex{0.005, 0.0}}}, HermitianMode::strict);
  s.gbar = TrigPoly(4);
  s.mean_f = 1.0;
  s.mean_g = 1.5;

  const CertificateReport r = evaluate(s, example_constants());
  CHECK(r.model == ModelKind::muskat_capillary);
  CHECK(r.e0 == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(r.smallness_ok);
  REQUIRE(r.sigma.has_value());
  CHECK(r.sigma->sigma1_A == doctest::Approx(0.43).epsilon(1e-12));
  CHECK(r.sigma->sigma2_A == doctest::Approx(0.43).epsilon(1e-12));
  CHECK(r.sigma->sigma1_b == doctest::Approx(0.40).epsilon(1e-12));
  CHECK(r.sigma->sigma2_b == doctest::Approx(0.40).epsilon(1e-12));
  CHECK(r.gates.thm1 == GateStatus::pass);
  CHECK(r.gates.thm3 == GateStatus::pass);
  CHECK(r.gates.thm2 == GateStatus::not_applicable);
  CHECK(r.gates.thm4 == GateStatus::not_applicable);
  CHECK(r.gates.thm5 == GateStatus::not_applicable);
  CHECK(r.gates.thm6 == GateStatus::not_applicable);
  REQUIRE(r.thm3_statement.has_value());
  CHECK(r.thm3_statement->first == doctest::Approx(0.155).epsilon(1e-12));
  CHECK(r.thm3_statement->second == doctest::Approx(0.655).epsilon(1e-12));
  CHECK(r.rate == doctest::Approx(0.83).epsilon(1e-12));
  CHECK_FALSE(r.thm4_lhs.has_value());
  CHECK_FALSE(r.Sigma.has_value());
  CHECK_FALSE(r.fitted_delta1.has_value());

  SUBCASE("zero perturbation reduces to pure-constant positivity") {
    SimState z;
    z.fbar = TrigPoly(4);
    z.gbar = TrigPoly(4);
    z.mean_f = 1.0;
    z.mean_g = 1.5;
    const CertificateReport rz = evaluate(z, example_constants());
    CHECK(rz.e0 == 0.0);
    CHECK(rz.smallness_ok);
    CHECK(rz.gates.thm1 == GateStatus::pass);
    CHECK(rz.rate == doctest::Approx(1.0).epsilon(1e-12));  // 0.5 + 0.5
  }

  SUBCASE("an oversized perturbation fails every gate") {
    SimState big;
    big.fbar = project(TrigPoly::cosine(1, 1.2), 4);  // e0 = 1.2 > min mean
    big.gbar = TrigPoly(4);
    big.mean_f = 1.0;
    big.mean_g = 1.5;
    const CertificateReport rb = evaluate(big, example_constants());
    CHECK_FALSE(rb.smallness_ok);
    CHECK(rb.gates.thm1 == GateStatus::fail);
    CHECK(rb.gates.thm3 == GateStatus::fail);
  }

  SUBCASE("gravity report gates only the b-pair") {
    const CertificateReport rg = evaluate(s, example_constants(MuskatVariant::gravity));
    CHECK(rg.model == ModelKind::muskat_gravity);
    REQUIRE(rg.sigma.has_value());
    CHECK_FALSE(rg.sigma->sigma_A_applicable);
    CHECK(rg.gates.thm2 == GateStatus::pass);
    CHECK(rg.gates.thm1 == GateStatus::not_applicable);
    CHECK(rg.gates.thm3 == GateStatus::not_applicable);
    REQUIRE(rg.thm4_lhs.has_value());
    CHECK(rg.thm4_lhs->first == doctest::Approx(0.75 - 0.08).epsilon(1e-12));
    CHECK(rg.gates.thm4 == GateStatus::pass);
    CHECK(rg.rate == doctest::Approx(0.40).epsilon(1e-12));
  }
}

TEST_CASE("report composition for the bilayer example state") {
  SimState s;
  s.fbar = project(TrigPoly::cosine(1, 2e-4), 4);
  s.gbar = TrigPoly(4);
  s.mean_f = 1.0;
  s.mean_g = 0.3;

  const CertificateReport r = evaluate(s, stokes_example());
  CHECK(r.model == ModelKind::stokes_capillary);
  CHECK(r.e0 == doctest::Approx(2e-4).epsilon(1e-14));
  CHECK(r.smallness_ok);
  REQUIRE(r.Sigma.has_value());
  CHECK(r.gates.thm5 == GateStatus::pass);
  CHECK(r.gates.thm1 == GateStatus::not_applicable);
  CHECK(r.rate == doctest::Approx(0.118970026776).epsilon(1e-9));
  // The second higher-regularity margin is negative at these means, so the
  // refined gate fails even though the base gate passes.
  REQUIRE(r.thm6.has_value());
  CHECK(r.gates.thm6 == GateStatus::fail);

  SUBCASE("amplitude 0.01 breaks the base gate at the same constants") {
    SimState big = s;
    big.fbar = project(TrigPoly::cosine(1, 0.01), 4);
    const CertificateReport rb = evaluate(big, stokes_example());
    CHECK(rb.smallness_ok);  // 0.01 < 0.3
    CHECK(rb.gates.thm5 == GateStatus::fail);  // Sigma2 < 0
  }

  SUBCASE("order-1 drive reports the gravity kind") {
    const CertificateReport r1 = evaluate(s, stokes_example(1));
    CHECK(r1.model == ModelKind::stokes_gravity);
    CHECK(r1.gates.thm5 == GateStatus::pass);
  }
}

TEST_CASE("sweep anchor: second A-margin across mean_g") {
  // sigma2_A = G - 1 - 0.07 at the example constants and e0 = 0.01.
  const MuskatConstants c = example_constants();
  const double expected[] = {-0.57, -0.07, 0.43};
  const double gs[] = {0.5, 1.0, 1.5};
  for (int i = 0; i < 3; ++i) {
    const MuskatSigmas s = muskat_sigmas(c, 1.0, gs[i], 0.01);
    CHECK(s.sigma2_A == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("margins are nonincreasing in the perturbation size") {
  Rng rng(314159);
  for (int t = 0; t < 300; ++t) {
    const double F = rng.uniform(0.3, 2.0), G = rng.uniform(0.3, 2.0);
    const double e0a = rng.uniform(0.0, 0.3);
    const double e0b = e0a + rng.uniform(0.0, 0.3);

    MuskatConstants mc;
    mc.b = rng.uniform(0.2, 2.0);
    mc.b_mu = rng.uniform(0.2, 2.0);
    mc.b_rho = rng.uniform(0.2, 2.0);
    mc.A = rng.uniform(0.2, 2.0);
    mc.A_mu = rng.uniform(0.2, 2.0);
    mc.A_gamma = rng.uniform(0.2, 2.0);
    mc.variant = MuskatVariant::capillary;

    const MuskatSigmas sa = muskat_sigmas(mc, F, G, e0a);
    const MuskatSigmas sb = muskat_sigmas(mc, F, G, e0b);
    CHECK(sb.sigma1_A <= sa.sigma1_A);
    CHECK(sb.sigma2_A <= sa.sigma2_A);
    CHECK(sb.sigma1_b <= sa.sigma1_b);
    CHECK(sb.sigma2_b <= sa.sigma2_b);

    const auto [ta, pa] = muskat_thm3_margins(mc, F, G, e0a);
    const auto [tb, pb] = muskat_thm3_margins(mc, F, G, e0b);
    CHECK(tb.first <= ta.first);
    CHECK(tb.second <= ta.second);
    CHECK(pb.first <= pa.first);
    CHECK(pb.second <= pa.second);

    MuskatConstants gc = mc;
    gc.A = gc.A_mu = gc.A_gamma = 0.0;
    gc.variant = MuskatVariant::gravity;
    const MarginPair ma = muskat_thm4_margins(gc, F, G, e0a);
    const MarginPair mb = muskat_thm4_margins(gc, F, G, e0b);
    CHECK(mb.first <= ma.first);
    CHECK(mb.second <= ma.second);

    StokesConstants sc;
    sc.rho = rng.uniform(1.0, 12.0);
    sc.mu = rng.uniform(0.2, 30.0);
    sc.zeta = (t % 2 == 0) ? 3 : 1;
    const StokesSigmas Sa = stokes_Sigmas(sc, F, G, e0a);
    const StokesSigmas Sb = stokes_Sigmas(sc, F, G, e0b);
    CHECK(Sb.Sigma1 <= Sa.Sigma1);
    CHECK(Sb.Sigma2 <= Sa.Sigma2);

    const StokesThm6 ra = stokes_thm6_margins(sc, F, G, e0a);
    const StokesThm6 rb = stokes_thm6_margins(sc, F, G, e0b);
    CHECK(rb.margins.first <= ra.margins.first);
    CHECK(rb.margins.second <= ra.margins.second);
  }
}

TEST_CASE("gate implications and the density-ordering consequence") {
  Rng rng(271828);
  int thm3_passes = 0, b_positive = 0;
  for (int t = 0; t < 500; ++t) {
    MuskatConstants mc;
    mc.b = rng.uniform(0.2, 2.0);
    mc.b_mu = rng.uniform(0.2, 2.0);
    mc.b_rho = rng.uniform(0.2, 2.5);
    mc.A = rng.uniform(0.2, 2.0);
    mc.A_mu = rng.uniform(0.2, 2.0);
    mc.A_gamma = rng.uniform(0.2, 2.5);
    mc.variant = MuskatVariant::capillary;
    const double F = rng.uniform(0.3, 2.0), G = rng.uniform(0.3, 2.0);
    const double e0 = rng.uniform(0.0, 0.2);

    // Refined gates presuppose the base gates.
    SimState s;
    const int K = 4;
    s.fbar = project(TrigPoly::cosine(1, e0), K);
    s.gbar = TrigPoly(K);
    s.mean_f = F;
    s.mean_g = G;
    const CertificateReport r = evaluate(s, mc);
    if (r.gates.thm3 == GateStatus::pass) {
      ++thm3_passes;
      CHECK(r.gates.thm1 == GateStatus::pass);
    }
    // Positive b-pair forces the denser fluid below.
    if (r.sigma->sigma1_b > 0.0 && r.sigma->sigma2_b > 0.0) {
      ++b_positive;
      CHECK(mc.b_rho > mc.b);
    }

    StokesConstants sc;
    sc.rho = rng.uniform(1.0, 12.0);
    sc.mu = rng.uniform(0.2, 30.0);
    sc.zeta = 3;
    const CertificateReport rs = evaluate(s, sc);
    if (rs.gates.thm6 == GateStatus::pass) CHECK(rs.gates.thm5 == GateStatus::pass);
  }
  // The draws must actually exercise the implications.
  CHECK(thm3_passes > 0);
  CHECK(b_positive > 0);
}
