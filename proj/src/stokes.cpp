#include "thinfilm/stokes.hpp"

#include <stdexcept>

namespace thinfilm {

namespace {

// Drive operator D: d/dx for zeta = 1, -d^3/dx^3 for zeta = 3.
TrigPoly drive(const TrigPoly& u, int zeta) {
  return (zeta == 1) ? derivative(u, 1) : -1.0 * derivative(u, 3);
}

}  // namespace

StokesConstants reduce_params(const StokesPhysicalParams& p) {
  if (!(p.mu_minus > 0.0) || !(p.mu_plus > 0.0) || !(p.rho_minus > 0.0) ||
      !(p.rho_plus > 0.0)) {
    throw std::invalid_argument("reduce_params: viscosities and densities must be positive");
  }
  double P = 0.0, Q = 0.0;
  StokesConstants c;
  switch (p.drive) {
    case StokesDrive::capillary:
      if (!(p.gamma_h > 0.0)) {
        throw std::invalid_argument("reduce_params: capillary drive needs gamma_h > 0");
      }
      P = p.gamma_f / (6.0 * p.mu_minus);
      Q = p.gamma_h / (6.0 * p.mu_minus);
      c.zeta = 3;
      break;
    case StokesDrive::gravity:
      if (p.gamma_f != 0.0 || p.gamma_h != 0.0) {
        throw std::invalid_argument("reduce_params: gravity drive requires zero surface tension");
      }
      if (!(p.G > 0.0)) throw std::invalid_argument("reduce_params: G must be positive");
      if (!(p.rho_minus > p.rho_plus)) {
        throw std::invalid_argument(
            "reduce_params: gravity drive needs the heavier fluid below (rho_minus > rho_plus)");
      }
      P = p.G * (p.rho_minus - p.rho_plus) / (6.0 * p.mu_minus);
      Q = p.G * p.rho_plus / (6.0 * p.mu_minus);
      c.zeta = 1;
      break;
  }
  c.rho = (P + Q) / Q;
  c.mu = p.mu_minus / p.mu_plus;
  return c;
}

StokesCoeffMatrix coeff_matrix(const StokesConstants& c, double mean_f, double mean_g) {
  const double F = mean_f, G = mean_g;
  const double F2 = F * F, F3 = F2 * F, G2 = G * G, G3 = G2 * G;
  StokesCoeffMatrix m;
  m.c11 = 2.0 * c.rho * F3 + 3.0 * F2 * G;
  m.c12 = 2.0 * F3 + 3.0 * F2 * G;
  m.c21 = 2.0 * c.mu * G3 + 3.0 * c.rho * F2 * G + 6.0 * F * G2;
  m.c22 = 2.0 * c.mu * G3 + 3.0 * F2 * G + 6.0 * F * G2;
  return m;
}

Mat2 linear_symbol(int k, const StokesCoeffMatrix& C, int zeta) {
  const double k2 = static_cast<double>(k) * k;
  const double kz = (zeta == 1) ? k2 : k2 * k2;
  return {-kz * C.c11, -kz * C.c12, -kz * C.c21, -kz * C.c22};
}

std::pair<TrigPoly, TrigPoly> nonlinear_rhs(const SimState& s, const StokesConstants& c) {
  const int K = s.K();
  const double F = s.mean_f, G = s.mean_g;
  const TrigPoly& fb = s.fbar;
  const TrigPoly& gb = s.gbar;

  // Shared monomials at exact intermediate bandwidth.
  const TrigPoly f2 = product(fb, fb, 2 * K);
  const TrigPoly fg = product(fb, gb, 2 * K);
  const TrigPoly g2 = product(gb, gb, 2 * K);
  const TrigPoly f3 = product(f2, fb, 3 * K);
  const TrigPoly g3 = product(g2, gb, 3 * K);
  const TrigPoly f2g = product(f2, gb, 3 * K);
  const TrigPoly g2f = product(g2, fb, 3 * K);

  // Mean-weighted fluctuation polynomials:
  //   quad_f = f^2 g - <f^2 g>-type group led by fbar,
  //   cub_f  = f^3 - F^3 expanded around the mean, and the g-led analogues.
  const TrigPoly quad_f = f2g + (2.0 * F) * fg + G * f2 + (F * F) * gb + (2.0 * F * G) * fb;
  const TrigPoly cub_f = f3 + (3.0 * F) * f2 + (3.0 * F * F) * fb;
  const TrigPoly cub_g = g3 + (3.0 * G) * g2 + (3.0 * G * G) * gb;
  const TrigPoly quad_g = g2f + (2.0 * G) * fg + F * g2 + (G * G) * fb + (2.0 * G * F) * gb;

  const TrigPoly p1 = 3.0 * quad_f + (2.0 * c.rho) * cub_f;
  const TrigPoly p2 = 3.0 * quad_f + 2.0 * cub_f;
  const TrigPoly p3 = (2.0 * c.mu) * cub_g + (3.0 * c.rho) * quad_f + 6.0 * quad_g;
  const TrigPoly p4 = (2.0 * c.mu) * cub_g + 3.0 * quad_f + 6.0 * quad_g;

  const TrigPoly Df = drive(fb, c.zeta);
  const TrigPoly Dg = drive(gb, c.zeta);

  const TrigPoly n_f = derivative(product(p1, Df, K) + product(p2, Dg, K), 1);
  const TrigPoly n_g = derivative(product(p3, Df, K) + product(p4, Dg, K), 1);
  return {n_f, n_g};
}

std::pair<TrigPoly, TrigPoly> full_rhs(const SimState& s, const StokesConstants& c) {
  const StokesCoeffMatrix C = coeff_matrix(c, s.mean_f, s.mean_g);
  auto [n_f, n_g] = nonlinear_rhs(s, c);
  std::vector<Complex> cf = n_f.half();
  std::vector<Complex> cg = n_g.half();
  for (int k = 1; k <= s.K(); ++k) {
    const Mat2 L = linear_symbol(k, C, c.zeta);
    Complex fh = s.fbar.half()[static_cast<size_t>(k)];
    Complex gh = s.gbar.half()[static_cast<size_t>(k)];
    apply(L, fh, gh);
    cf[static_cast<size_t>(k)] += fh;
    cg[static_cast<size_t>(k)] += gh;
  }
  return {TrigPoly::from_half(std::move(cf)), TrigPoly::from_half(std::move(cg))};
}

std::pair<TrigPoly, TrigPoly> unsplit_rhs(const SimState& s, const StokesConstants& c) {
  const int K = s.K();
  const TrigPoly f = s.fbar.with_mean(s.mean_f);
  const TrigPoly g = s.gbar.with_mean(s.mean_g);
  const TrigPoly f2 = product(f, f, 2 * K);
  const TrigPoly g2 = product(g, g, 2 * K);
  const TrigPoly f3 = product(f2, f, 3 * K);
  const TrigPoly g3 = product(g2, g, 3 * K);
  const TrigPoly f2g = product(f2, g, 3 * K);
  const TrigPoly g2f = product(g2, f, 3 * K);

  const TrigPoly pf_f = 2.0 * c.rho * f3 + 3.0 * f2g;  // multiplies D f
  const TrigPoly pf_g = 2.0 * f3 + 3.0 * f2g;          // multiplies D g
  const TrigPoly pg_f = 2.0 * c.mu * g3 + 3.0 * c.rho * f2g + 6.0 * g2f;
  const TrigPoly pg_g = 2.0 * c.mu * g3 + 3.0 * f2g + 6.0 * g2f;

  const TrigPoly Df = drive(f, c.zeta);
  const TrigPoly Dg = drive(g, c.zeta);

  const TrigPoly out_f = derivative(product(pf_f, Df, K) + product(pf_g, Dg, K), 1);
  const TrigPoly out_g = derivative(product(pg_f, Df, K) + product(pg_g, Dg, K), 1);
  return {out_f, out_g};
}

}  // namespace thinfilm
