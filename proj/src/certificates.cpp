#include "thinfilm/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thinfilm/norms.hpp"

namespace thinfilm {

namespace {

void require_nonnegative_e0(double e0) {
  if (!(e0 >= 0.0)) throw std::invalid_argument("certificates: e0 must be >= 0");
}

}  // namespace

MuskatSigmas muskat_sigmas(const MuskatConstants& c, double mean_f, double mean_g,
                           double e0) {
  require_nonnegative_e0(e0);
  const double F = mean_f, G = mean_g;
  MuskatSigmas s;
  if (c.variant == MuskatVariant::capillary) {
    const double corr_A = (c.A_mu + 2.0 * c.A_gamma + 2.0 * c.A) * e0;
    s.sigma1_A = F * c.A_gamma - G * c.A_mu - corr_A;
    s.sigma2_A = G * c.A_mu - F * c.A - corr_A;
    s.delta_A = std::min(s.sigma1_A, s.sigma2_A);
    s.sigma_A_applicable = true;
  } else {
    // The fourth-order block vanishes identically; the A-pair carries no
    // information and is reported as not applicable.
    s.sigma1_A = s.sigma2_A = s.delta_A = 0.0;
    s.sigma_A_applicable = false;
  }
  const double corr_b = (2.0 * c.b_rho + 2.0 * c.b + 4.0 * c.b_mu) * e0;
  s.sigma1_b = F * c.b_rho - G * c.b_mu - corr_b;
  s.sigma2_b = G * c.b_mu - F * c.b - corr_b;
  s.delta_b = std::min(s.sigma1_b, s.sigma2_b);
  return s;
}

std::pair<MarginPair, MarginPair> muskat_thm3_margins(const MuskatConstants& c,
                                                      double mean_f, double mean_g,
                                                      double e0) {
  require_nonnegative_e0(e0);
  if (c.variant != MuskatVariant::capillary) {
    throw std::invalid_argument("muskat_thm3_margins: capillary constants required");
  }
  const double F = mean_f, G = mean_g;
  const double base_first = G * c.A_mu - 0.5 * (F * c.A + G * c.A_mu);
  const double base_second = F * c.A_gamma - 0.5 * (F * c.A + G * c.A_mu);
  const double coeff_statement = c.A_gamma + (13.0 / 4.0) * c.A + (17.0 / 4.0) * c.A_mu;
  const double sqrt2 = std::sqrt(2.0);
  const double coeff_proof = sqrt2 * c.A_gamma + (9.0 / 4.0) * c.A +
                             (sqrt2 + 9.0 / 4.0) * c.A_mu;
  MarginPair statement{base_first - coeff_statement * e0,
                       base_second - coeff_statement * e0};
  MarginPair proof{base_first - coeff_proof * e0, base_second - coeff_proof * e0};
  return {statement, proof};
}

MarginPair muskat_thm4_margins(const MuskatConstants& c, double mean_f, double mean_g,
                               double e0) {
  require_nonnegative_e0(e0);
  if (c.variant != MuskatVariant::gravity) {
    throw std::invalid_argument("muskat_thm4_margins: gravity constants required");
  }
  const double F = mean_f, G = mean_g;
  const double half_sum = 0.5 * (G * c.b_mu + F * c.b);
  const double coeff = c.b_rho + c.b_mu + 2.5 * c.b_mu + 2.5 * c.b;
  return {F * c.b_rho - half_sum - coeff * e0, G * c.b_mu - half_sum - coeff * e0};
}

StokesSigmas stokes_Sigmas(const StokesConstants& c, double mean_f, double mean_g,
                           double e0) {
  require_nonnegative_e0(e0);
  const double F = mean_f, G = mean_g;
  const double rho = c.rho, mu = c.mu;
  const double F2 = F * F, F3 = F2 * F, G2 = G * G, G3 = G2 * G;
  const double e2 = e0 * e0;

  StokesSigmas s;
  s.Sigma1 = 2.0 * rho * F3 + 3.0 * F2 * G * (1.0 - rho) - (2.0 * mu * G3 + 6.0 * F * G2) -
             e0 * ((78.0 + 20.0 * rho + 14.0 * mu) * e2 +
                   (F * (36.0 * rho + 84.0) + (81.0 + 30.0 * mu + 9.0 * rho) * G) * e0) -
             e0 * ((18.0 * mu + 18.0) * G2 + (18.0 * rho + 18.0) * F2 +
                   (12.0 * rho + 60.0) * G * F);
  s.Sigma2 = 2.0 * mu * G3 + 6.0 * F * G2 - 2.0 * F3 -
             e0 * ((14.0 * mu + 15.0 * rho + 83.0) * e2 +
                   ((30.0 * mu + 6.0 * rho + 84.0) * G + (96.0 + 24.0 * rho) * F) * e0) -
             e0 * ((18.0 * mu + 18.0) * G2 + (27.0 + 9.0 * rho) * F2 +
                   (6.0 * rho + 66.0) * F * G);
  s.epsilon = std::min(s.Sigma1, s.Sigma2);
  return s;
}

StokesThm6 stokes_thm6_margins(const StokesConstants& c, double mean_f, double mean_g,
                               double e0) {
  require_nonnegative_e0(e0);
  if (c.zeta != 1 && c.zeta != 3) {
    throw std::invalid_argument("stokes_thm6_margins: zeta must be 1 or 3");
  }
  const double F = mean_f, G = mean_g;
  const double rho = c.rho, mu = c.mu;
  const double F2 = F * F, F3 = F2 * F, G2 = G * G, G3 = G2 * G;
  const double e2 = e0 * e0;

  StokesThm6 r;
  if (c.zeta == 1) {
    r.C_zeta = 0.5 * e2 * (23.0 + 5.0 * rho + 4.0 * mu) +
               0.5 * e0 * (F * (36.0 + 12.0 * rho) + G * (33.0 + 3.0 * rho + 4.0 * mu)) +
               0.5 * (F2 * (15.0 + 9.0 * rho) + G2 * (12.0 + 12.0 * mu) +
                      F * G * (42.0 + 6.0 * rho));
  } else {
    r.C_zeta = e2 * (32.0 + 55.0 * rho / 8.0 + 15.0 * mu / 2.0) +
               e0 * (F * (66.0 + 18.0 * rho) + G * (36.0 + 21.0 * rho / 2.0 + 18.0 * mu)) +
               (F2 * (57.0 / 4.0 + 39.0 * rho / 4.0) + G2 * (27.0 / 2.0 + 15.0 * mu / 2.0) +
                F * G * (81.0 / 2.0 + 15.0 * rho / 2.0));
  }
  const double cross = 1.5 * (rho - 1.0) * F2 * G;
  r.margins.first = (2.0 * rho - 1.0) * F3 - cross - 3.0 * F * G2 - mu * G3 - e0 * r.C_zeta;
  r.margins.second = mu * G3 + 3.0 * F * G2 - cross - F3 - e0 * r.C_zeta;
  return r;
}

namespace {

GateStatus gate(bool ok) { return ok ? GateStatus::pass : GateStatus::fail; }

CertificateReport base_report(const SimState& s) {
  s.validate();
  CertificateReport r;
  r.e0 = wiener_norm(s.fbar, 0.0) + wiener_norm(s.gbar, 0.0);
  r.mean_f = s.mean_f;
  r.mean_g = s.mean_g;
  r.smallness_ok = r.e0 < std::min(s.mean_f, s.mean_g);
  return r;
}

}  // namespace

CertificateReport evaluate(const SimState& initial, const MuskatConstants& c) {
  CertificateReport r = base_report(initial);
  r.model = (c.variant == MuskatVariant::capillary) ? ModelKind::muskat_capillary
                                                    : ModelKind::muskat_gravity;
  r.sigma = muskat_sigmas(c, r.mean_f, r.mean_g, r.e0);
  const MuskatSigmas& s = *r.sigma;
  const bool b_ok = s.sigma1_b > 0.0 && s.sigma2_b > 0.0;

  if (c.variant == MuskatVariant::capillary) {
    const bool a_ok = s.sigma1_A > 0.0 && s.sigma2_A > 0.0;
    r.gates.thm1 = gate(r.smallness_ok && a_ok && b_ok);
    auto [statement, proof] = muskat_thm3_margins(c, r.mean_f, r.mean_g, r.e0);
    r.thm3_statement = statement;
    r.thm3_proof = proof;
    r.gates.thm3 = gate(r.gates.thm1 == GateStatus::pass && statement.positive());
    r.rate = s.delta_A + s.delta_b;
  } else {
    r.gates.thm2 = gate(r.smallness_ok && b_ok);
    r.thm4_lhs = muskat_thm4_margins(c, r.mean_f, r.mean_g, r.e0);
    r.gates.thm4 = gate(r.gates.thm2 == GateStatus::pass && r.thm4_lhs->positive());
    r.rate = s.delta_b;
  }

  // Positive b-margins force the denser fluid below: summing the pair gives
  // mean_f (b_rho - b) > 2 e0 (...) >= 0, so a passing report with
  // b_rho <= b would indicate corrupted arithmetic.
  if (b_ok && !(c.b_rho > c.b)) {
    throw std::logic_error("certificates: b-margins positive but b_rho <= b");
  }
  return r;
}

CertificateReport evaluate(const SimState& initial, const StokesConstants& c) {
  CertificateReport r = base_report(initial);
  r.model = (c.zeta == 3) ? ModelKind::stokes_capillary : ModelKind::stokes_gravity;
  r.Sigma = stokes_Sigmas(c, r.mean_f, r.mean_g, r.e0);
  r.thm6 = stokes_thm6_margins(c, r.mean_f, r.mean_g, r.e0);
  const bool sig_ok = r.Sigma->Sigma1 > 0.0 && r.Sigma->Sigma2 > 0.0;
  r.gates.thm5 = gate(r.smallness_ok && sig_ok);
  r.gates.thm6 = gate(r.gates.thm5 == GateStatus::pass && r.thm6->margins.positive());
  r.rate = r.Sigma->epsilon;
  return r;
}

}  // namespace thinfilm
