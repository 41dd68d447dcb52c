#pragma once

#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Homogeneous weighted-coefficient norms of zero-mean polynomials.  Both
// reject input with a nonzero mean: the caller decides what the mean should
// be and must strip it explicitly (mean_removed()) before asking for a
// homogeneous norm.
//
//   wiener_norm(u, alpha)  = sum_{|k|<=K} |k|^alpha |u_hat(k)|
//   sobolev_norm(u, s)     = ( sum_{|k|<=K} |k|^{2s} |u_hat(k)|^2 )^{1/2}
//
// Conventions: these are pure coefficient sums with no 2*pi factor.  The
// integral L2 norm relates to the s = 0 case by
// ||u||_{L2}^2 = integral |u|^2 dx = 2*pi * sobolev_norm(u, 0)^2.
double wiener_norm(const TrigPoly& u, double alpha);
double sobolev_norm(const TrigPoly& u, double s);

// Grid maximum of |d^n u / dx^n| over M uniform samples; a lower bound on
// the true sup norm.  M = 0 selects the default max(8K+2, 4096), for which
// the relative underestimate of a bandwidth-K polynomial is at most about
// (pi*K/M)^2/2 (second-order expansion around the true extremum); at the
// default grid this is ~1e-4 for K = 64 and well below 1e-6 for K <= 16.
double sup_norm_deriv(const TrigPoly& u, int n, int M = 0);

// Quadrature L4 norm of d^n u / dx^n: (integral |.|^4 dx)^{1/4} by the
// uniform M-point rule.  M = 0 selects 4(K+2), which integrates the degree-4K
// integrand exactly (to rounding).
double lp4_norm_deriv(const TrigPoly& u, int n, int M = 0);

// Quadrature L2 norm sqrt(integral u^2 dx); exact for M >= 2K+1, default
// M = 0 selects 4(K+2).  Carries the 2*pi-periodic normalization, i.e.
// equals sqrt(2*pi) * sobolev_norm(u, 0) up to rounding.
double l2_norm_quadrature(const TrigPoly& u, int M = 0);

// Grid minimum of u over M uniform samples (default grid as sup_norm_deriv).
double grid_min(const TrigPoly& u, int M = 0);

}  // namespace thinfilm
