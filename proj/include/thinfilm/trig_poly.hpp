#pragma once

#include <complex>
#include <vector>

namespace thinfilm {

using Complex = std::complex<double>;

// How a user-supplied two-sided coefficient list is reconciled with the
// real-valuedness constraint u_hat(-k) == conj(u_hat(k)).
enum class HermitianMode {
  strict,      // mismatched +/-k pairs (beyond 1e-12) are rejected
  symmetrize,  // both entries replaced by their Hermitian average
};

// Real trigonometric polynomial on the 2*pi torus,
//
//   u(x) = sum_{|k| <= K} u_hat(k) e^{ikx},   u_hat(-k) = conj(u_hat(k)),
//
// stored as the half-spectrum u_hat(0..K).  Only k >= 0 is kept, so
// real-valuedness is structural: no operation can produce a non-real
// function, and u_hat(0) (the mean) is kept exactly real.  A zero-mean
// polynomial has u_hat(0) == 0.0 exactly, not just approximately.
//
// Values are immutable in normal use (operations return new objects), so
// instances can be shared freely across threads.
class TrigPoly {
 public:
  // Zero polynomial of bandwidth 0.
  TrigPoly() : c_(1, Complex{0.0, 0.0}) {}

  // Zero polynomial of bandwidth K >= 0.
  explicit TrigPoly(int K);

  // Takes coeffs[k] = u_hat(k) for k = 0..K.  The k = 0 entry must be real
  // (|imag| <= 1e-12, which is then dropped).
  static TrigPoly from_half(std::vector<Complex> coeffs);

  // Builds from (k, value) entries with k of either sign.  Entries at -k
  // supply the conjugate mirror of +k; when both signs are present the
  // declared mode decides between rejecting mismatches and averaging them.
  static TrigPoly from_two_sided(int K,
                                 const std::vector<std::pair<int, Complex>>& entries,
                                 HermitianMode mode);

  // amplitude * cos(kx) and amplitude * sin(kx); k = 0 gives the constant
  // `amplitude` (cosine) or zero (sine).
  static TrigPoly cosine(int k, double amplitude);
  static TrigPoly sine(int k, double amplitude);

  int K() const { return static_cast<int>(c_.size()) - 1; }

  // u_hat(k); conjugated for k < 0 and zero for |k| > K.
  Complex coeff(int k) const;

  // Assigns u_hat(k), k >= 0.  k = 0 must be real (|imag| <= 1e-12).
  void set_coeff(int k, Complex v);

  double mean() const { return c_[0].real(); }
  bool is_zero_mean() const { return c_[0] == Complex{0.0, 0.0}; }

  // Copy with u_hat(0) := m exactly / := 0 exactly.
  TrigPoly with_mean(double m) const;
  TrigPoly mean_removed() const;

  bool is_zero() const;

  const std::vector<Complex>& half() const { return c_; }

 private:
  std::vector<Complex> c_;  // c_[k] = u_hat(k), k = 0..K
};

// Linear arithmetic; result bandwidth is the larger of the operands'.
TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a);
TrigPoly operator*(double s, const TrigPoly& a);

// n-th derivative: coefficient-wise multiplication by (ik)^n.  The mode-0
// coefficient of any derivative (n >= 1) is exactly zero.
TrigPoly derivative(const TrigPoly& u, int n);

// Projection P_{K'}: drops coefficients with |k| > K'.  Idempotent; extends
// with zeros when K' exceeds the current bandwidth.
TrigPoly project(const TrigPoly& u, int K_prime);

// Pointwise product as the exact circular convolution of coefficient
// sequences, truncated to |k| <= K_out.  K_out = -1 keeps every mode
// (K_out = u.K() + v.K()), which makes the product exact.  Truncation to
// K_out equals project(full product, K_out) coefficient-for-coefficient:
// retained modes are computed from the full operand data either way.
// The mode-0 output is accumulated by a manifestly real formula, so the
// product of real polynomials has an exactly real mean.
TrigPoly product(const TrigPoly& u, const TrigPoly& v, int K_out = -1);

// Samples u at x_j = -pi + 2*pi*j/M, j = 0..M-1.  Requires M >= 2K+1 so the
// sample set determines the polynomial.  Synthesis runs over the stored
// half-spectrum, so the imaginary parts cancel identically and the samples
// are real by construction.
std::vector<double> grid_values(const TrigPoly& u, int M);

// Trapezoid (= rectangle, on the torus) quadrature extraction of
// u_hat(k) = (1/2pi) integral u(x) e^{-ikx} dx from M uniform samples taken
// at x_j = -pi + 2*pi*j/M.  Exact (to rounding) for band-limited samples
// whenever M >= 2*K_content + 1.  Used by oracle-style reconstructions.
TrigPoly from_grid(const std::vector<double>& samples, int K);

double mean(const TrigPoly& u);

}  // namespace thinfilm
