#pragma once

#include <cmath>

#include "thinfilm/trig_poly.hpp"

namespace thinfilm {

// Dense real 2x2 matrix; the per-wavenumber linear blocks and their
// propagators are all this size, so everything is explicit and allocation
// free.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double det() const { return a11 * a22 - a12 * a21; }

  double frobenius() const {
    return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
  }

  Mat2 scaled(double s) const { return {s * a11, s * a12, s * a21, s * a22}; }

  Mat2 plus_identity(double s = 1.0) const {
    return {a11 + s, a12, a21, a22 + s};
  }
};

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// Inverse by the adjugate; caller is responsible for checking det.
inline Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

// Applies the real matrix to the complex coefficient pair (f_hat, g_hat),
// acting separately on real and imaginary parts.
inline void apply(const Mat2& m, Complex& f, Complex& g) {
  const Complex nf = m.a11 * f + m.a12 * g;
  const Complex ng = m.a21 * f + m.a22 * g;
  f = nf;
  g = ng;
}

// Solves m * (x, y) = (f, g) by Gaussian elimination with partial pivoting;
// used as the propagator fallback when the cached inverse would be badly
// conditioned.
inline void solve_pivoted(const Mat2& m, Complex& f, Complex& g) {
  double a = m.a11, b = m.a12, c = m.a21, d = m.a22;
  Complex r1 = f, r2 = g;
  if (std::abs(c) > std::abs(a)) {
    std::swap(a, c);
    std::swap(b, d);
    std::swap(r1, r2);
  }
  const double l = c / a;
  const double s = d - l * b;
  const Complex y = (r2 - l * r1) / s;
  const Complex x = (r1 - b * y) / a;
  f = x;
  g = y;
}

}  // namespace thinfilm
