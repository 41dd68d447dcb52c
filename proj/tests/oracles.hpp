#pragma once

// Test-side reference numerics, deliberately written with a different
// algorithm and a wider type than anything in the library: a long-double
// 2x2 matrix exponential by scaling-and-squaring with a Taylor core.  Used
// to check the implicit linear propagators against the exact flow.

#include <cmath>
#include <utility>

#include "thinfilm/linalg2.hpp"
#include "thinfilm/trig_poly.hpp"

namespace oracles {

struct LMat2 {
  long double a11 = 0.0L, a12 = 0.0L, a21 = 0.0L, a22 = 0.0L;
};

inline LMat2 lmul(const LMat2& a, const LMat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// exp(t * m) in long double.
inline LMat2 expm(const thinfilm::Mat2& m, double t) {
  LMat2 x{static_cast<long double>(m.a11) * t, static_cast<long double>(m.a12) * t,
          static_cast<long double>(m.a21) * t, static_cast<long double>(m.a22) * t};
  long double norm = std::fabs(x.a11) + std::fabs(x.a12) + std::fabs(x.a21) +
                     std::fabs(x.a22);
  int squarings = 0;
  while (norm > 0.25L && squarings < 200) {
    x.a11 /= 2.0L;
    x.a12 /= 2.0L;
    x.a21 /= 2.0L;
    x.a22 /= 2.0L;
    norm /= 2.0L;
    ++squarings;
  }
  LMat2 sum{1.0L, 0.0L, 0.0L, 1.0L};
  LMat2 term{1.0L, 0.0L, 0.0L, 1.0L};
  for (int j = 1; j <= 40; ++j) {
    term = lmul(term, x);
    const long double inv = 1.0L / static_cast<long double>(j);
    term.a11 *= inv;
    term.a12 *= inv;
    term.a21 *= inv;
    term.a22 *= inv;
    sum.a11 += term.a11;
    sum.a12 += term.a12;
    sum.a21 += term.a21;
    sum.a22 += term.a22;
  }
  for (int i = 0; i < squarings; ++i) sum = lmul(sum, sum);
  return sum;
}

// Applies the real long-double matrix to a complex coefficient pair.
inline std::pair<thinfilm::Complex, thinfilm::Complex> apply_lmat(
    const LMat2& e, thinfilm::Complex f, thinfilm::Complex g) {
  const long double fr = e.a11 * static_cast<long double>(f.real()) +
                         e.a12 * static_cast<long double>(g.real());
  const long double fi = e.a11 * static_cast<long double>(f.imag()) +
                         e.a12 * static_cast<long double>(g.imag());
  const long double gr = e.a21 * static_cast<long double>(f.real()) +
                         e.a22 * static_cast<long double>(g.real());
  const long double gi = e.a21 * static_cast<long double>(f.imag()) +
                         e.a22 * static_cast<long double>(g.imag());
  return {thinfilm::Complex{static_cast<double>(fr), static_cast<double>(fi)},
          thinfilm::Complex{static_cast<double>(gr), static_cast<double>(gi)}};
}

}  // namespace oracles
