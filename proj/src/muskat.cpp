#include "thinfilm/muskat.hpp"

#include <stdexcept>

namespace thinfilm {

MuskatConstants reduce_params(const MuskatPhysicalParams& p, MuskatVariant variant) {
  if (!(p.mu_minus > 0.0) || !(p.mu_plus > 0.0) || !(p.rho_minus > 0.0) ||
      !(p.rho_plus > 0.0) || !(p.G > 0.0)) {
    throw std::invalid_argument("reduce_params: viscosities, densities and G must be positive");
  }
  if (p.gamma_f < 0.0 || p.gamma_h < 0.0) {
    throw std::invalid_argument("reduce_params: surface tensions must be >= 0");
  }
  MuskatConstants c;
  c.variant = variant;
  c.b = p.rho_plus;
  c.b_mu = (p.mu_minus / p.mu_plus) * c.b;
  c.b_rho = (p.rho_minus / p.rho_plus) * c.b;
  switch (variant) {
    case MuskatVariant::capillary:
      if (!(p.gamma_h > 0.0)) {
        throw std::invalid_argument("reduce_params: capillary variant needs gamma_h > 0");
      }
      c.A = p.gamma_h / p.G;
      c.A_mu = (p.mu_minus / p.mu_plus) * c.A;
      c.A_gamma = ((p.gamma_f + p.gamma_h) / p.gamma_h) * c.A;
      break;
    case MuskatVariant::gravity:
      if (p.gamma_f != 0.0 || p.gamma_h != 0.0) {
        throw std::invalid_argument("reduce_params: gravity variant requires zero surface tension");
      }
      c.A = c.A_mu = c.A_gamma = 0.0;
      break;
  }
  return c;
}

Mat2 linear_symbol(int k, const MuskatConstants& c, double mean_f, double mean_g) {
  const double k2 = static_cast<double>(k) * k;
  const double k4 = k2 * k2;
  return {-mean_f * (c.A_gamma * k4 + c.b_rho * k2),
          -mean_f * (c.A * k4 + c.b * k2),
          -mean_g * (c.A_mu * k4 + c.b_mu * k2),
          -mean_g * (c.A_mu * k4 + c.b_mu * k2)};
}

std::pair<TrigPoly, TrigPoly> nonlinear_rhs(const SimState& s, const MuskatConstants& c,
                                            N2bLeading n2b) {
  const int K = s.K();
  const TrigPoly df1 = derivative(s.fbar, 1);
  const TrigPoly dg1 = derivative(s.gbar, 1);
  const TrigPoly df3 = derivative(s.fbar, 3);
  const TrigPoly dg3 = derivative(s.gbar, 3);

  // First component: one combined bracket, projected, then differentiated.
  const TrigPoly bracket_f =
      c.b_rho * df1 + c.b * dg1 - c.A_gamma * df3 - c.A * dg3;
  const TrigPoly n_f = derivative(product(s.fbar, bracket_f, K), 1);

  TrigPoly n_g;
  if (n2b == N2bLeading::gbar) {
    const TrigPoly bracket_g =
        c.b_mu * (df1 + dg1) - c.A_mu * (df3 + dg3);
    n_g = derivative(product(s.gbar, bracket_g, K), 1);
  } else {
    // Alternate truncation: the second-order part is led by fbar; the
    // fourth-order part keeps gbar.
    const TrigPoly second = c.b_mu * (df1 + dg1);
    const TrigPoly fourth = c.A_mu * (df3 + dg3);
    n_g = derivative(product(s.fbar, second, K) - product(s.gbar, fourth, K), 1);
  }
  return {n_f, n_g};
}

std::pair<TrigPoly, TrigPoly> full_rhs(const SimState& s, const MuskatConstants& c,
                                       N2bLeading n2b) {
  auto [n_f, n_g] = nonlinear_rhs(s, c, n2b);
  std::vector<Complex> cf = n_f.half();
  std::vector<Complex> cg = n_g.half();
  for (int k = 1; k <= s.K(); ++k) {
    const Mat2 L = linear_symbol(k, c, s.mean_f, s.mean_g);
    Complex fh = s.fbar.half()[static_cast<size_t>(k)];
    Complex gh = s.gbar.half()[static_cast<size_t>(k)];
    apply(L, fh, gh);
    cf[static_cast<size_t>(k)] += fh;
    cg[static_cast<size_t>(k)] += gh;
  }
  return {TrigPoly::from_half(std::move(cf)), TrigPoly::from_half(std::move(cg))};
}

std::pair<TrigPoly, TrigPoly> unsplit_rhs(const SimState& s, const MuskatConstants& c) {
  const int K = s.K();
  const TrigPoly f = s.fbar.with_mean(s.mean_f);
  const TrigPoly g = s.gbar.with_mean(s.mean_g);
  // Derivatives ignore the means, so the brackets equal their split-form
  // counterparts; the difference is that the leading product factor keeps
  // its mean, which is exactly where the linear part comes from.
  const TrigPoly bracket_f = c.A_gamma * derivative(f, 3) + c.A * derivative(g, 3) -
                             c.b_rho * derivative(f, 1) - c.b * derivative(g, 1);
  const TrigPoly bracket_g = c.A_mu * (derivative(f, 3) + derivative(g, 3)) -
                             c.b_mu * (derivative(f, 1) + derivative(g, 1));
  const TrigPoly out_f = -1.0 * derivative(product(f, bracket_f, 2 * K), 1);
  const TrigPoly out_g = -1.0 * derivative(product(g, bracket_g, 2 * K), 1);
  return {project(out_f, K), project(out_g, K)};
}

}  // namespace thinfilm
