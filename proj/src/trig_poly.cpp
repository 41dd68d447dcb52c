#include "thinfilm/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thinfilm {

namespace {

constexpr double kHermitianTol = 1e-12;

Complex checked_real(Complex v, const char* what) {
  if (std::abs(v.imag()) > kHermitianTol) {
    throw std::invalid_argument(std::string(what) +
                                ": mode-0 coefficient must be real");
  }
  return Complex{v.real(), 0.0};
}

}  // namespace

TrigPoly::TrigPoly(int K) {
  if (K < 0) throw std::invalid_argument("TrigPoly: bandwidth must be >= 0");
  c_.assign(static_cast<size_t>(K) + 1, Complex{0.0, 0.0});
}

TrigPoly TrigPoly::from_half(std::vector<Complex> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("from_half: empty spectrum");
  coeffs[0] = checked_real(coeffs[0], "from_half");
  TrigPoly u;
  u.c_ = std::move(coeffs);
  return u;
}

TrigPoly TrigPoly::from_two_sided(int K,
                                  const std::vector<std::pair<int, Complex>>& entries,
                                  HermitianMode mode) {
  TrigPoly u(K);
  std::vector<char> seen(static_cast<size_t>(K) + 1, 0);
  for (const auto& [k, v] : entries) {
    if (std::abs(k) > K) {
      throw std::invalid_argument("from_two_sided: wavenumber " +
                                  std::to_string(k) + " exceeds bandwidth " +
                                  std::to_string(K));
    }
    // Entry at -k contributes conj(v) to the stored +|k| slot.
    const int kk = std::abs(k);
    const Complex contrib = (k < 0) ? std::conj(v) : v;
    if (!seen[kk]) {
      u.c_[kk] = contrib;
      seen[kk] = 1;
      continue;
    }
    // Second sighting of this |k|: reconcile with what is already stored.
    switch (mode) {
      case HermitianMode::strict:
        if (std::abs(u.c_[kk] - contrib) > kHermitianTol) {
          throw std::invalid_argument(
              "from_two_sided: coefficients at +/-" + std::to_string(kk) +
              " violate conjugate symmetry");
        }
        break;
      case HermitianMode::symmetrize:
        u.c_[kk] = 0.5 * (u.c_[kk] + contrib);
        break;
    }
  }
  u.c_[0] = (mode == HermitianMode::strict)
                ? checked_real(u.c_[0], "from_two_sided")
                : Complex{u.c_[0].real(), 0.0};
  return u;
}

TrigPoly TrigPoly::cosine(int k, double amplitude) {
  if (k < 0) throw std::invalid_argument("cosine: wavenumber must be >= 0");
  TrigPoly u(k);
  if (k == 0) {
    u.c_[0] = Complex{amplitude, 0.0};
  } else {
    u.c_[static_cast<size_t>(k)] = Complex{0.5 * amplitude, 0.0};
  }
  return u;
}

TrigPoly TrigPoly::sine(int k, double amplitude) {
  if (k < 0) throw std::invalid_argument("sine: wavenumber must be >= 0");
  TrigPoly u(k);
  if (k > 0) {
    // a sin(kx) = a (e^{ikx} - e^{-ikx}) / (2i)  =>  u_hat(k) = -i a/2.
    u.c_[static_cast<size_t>(k)] = Complex{0.0, -0.5 * amplitude};
  }
  return u;
}

Complex TrigPoly::coeff(int k) const {
  const int kk = std::abs(k);
  if (kk > K()) return Complex{0.0, 0.0};
  const Complex v = c_[static_cast<size_t>(kk)];
  return (k < 0) ? std::conj(v) : v;
}

void TrigPoly::set_coeff(int k, Complex v) {
  if (k < 0) {
    throw std::invalid_argument(
        "set_coeff: negative wavenumbers are implied by conjugation; "
        "assign the k >= 0 slot instead");
  }
  if (k > K()) throw std::invalid_argument("set_coeff: wavenumber exceeds bandwidth");
  c_[static_cast<size_t>(k)] = (k == 0) ? checked_real(v, "set_coeff") : v;
}

TrigPoly TrigPoly::with_mean(double m) const {
  TrigPoly u = *this;
  u.c_[0] = Complex{m, 0.0};
  return u;
}

TrigPoly TrigPoly::mean_removed() const {
  TrigPoly u = *this;
  u.c_[0] = Complex{0.0, 0.0};
  return u;
}

bool TrigPoly::is_zero() const {
  return std::all_of(c_.begin(), c_.end(),
                     [](Complex v) { return v == Complex{0.0, 0.0}; });
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  const TrigPoly& hi = (a.K() >= b.K()) ? a : b;
  const TrigPoly& lo = (a.K() >= b.K()) ? b : a;
  std::vector<Complex> c = hi.half();
  for (int k = 0; k <= lo.K(); ++k) c[static_cast<size_t>(k)] += lo.half()[static_cast<size_t>(k)];
  return TrigPoly::from_half(std::move(c));
}

TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) { return a + (-b); }

TrigPoly operator-(const TrigPoly& a) { return -1.0 * a; }

TrigPoly operator*(double s, const TrigPoly& a) {
  std::vector<Complex> c = a.half();
  for (Complex& v : c) v *= s;
  return TrigPoly::from_half(std::move(c));
}

TrigPoly derivative(const TrigPoly& u, int n) {
  if (n < 0) throw std::invalid_argument("derivative: order must be >= 0");
  if (n == 0) return u;
  std::vector<Complex> c(u.half().size(), Complex{0.0, 0.0});
  for (int k = 1; k <= u.K(); ++k) {
    // (ik)^n = i^n * k^n with i^n cycling {1, i, -1, -i}.
    double kn = 1.0;
    for (int j = 0; j < n; ++j) kn *= static_cast<double>(k);
    const Complex v = u.half()[static_cast<size_t>(k)];
    switch (n & 3) {
      case 0: c[static_cast<size_t>(k)] = kn * v; break;
      case 1: c[static_cast<size_t>(k)] = Complex{-kn * v.imag(), kn * v.real()}; break;
      case 2: c[static_cast<size_t>(k)] = -kn * v; break;
      case 3: c[static_cast<size_t>(k)] = Complex{kn * v.imag(), -kn * v.real()}; break;
    }
  }
  return TrigPoly::from_half(std::move(c));
}

TrigPoly project(const TrigPoly& u, int K_prime) {
  if (K_prime < 0) throw std::invalid_argument("project: bandwidth must be >= 0");
  std::vector<Complex> c(static_cast<size_t>(K_prime) + 1, Complex{0.0, 0.0});
  const int copy = std::min(K_prime, u.K());
  for (int k = 0; k <= copy; ++k) c[static_cast<size_t>(k)] = u.half()[static_cast<size_t>(k)];
  return TrigPoly::from_half(std::move(c));
}

// w_hat(k) = sum_m u_hat(m) v_hat(k - m).  With the half-spectrum layout the
// sum splits into three conjugation regimes:
//   m < 0      : conj(u[-m]) * v[k - m]     (k - m <= Kv bounds m >= k - Kv)
//   0 <= m <= k: u[m] * v[k - m]
//   m > k      : u[m] * conj(v[m - k])
// Each regime is a tight multiply-accumulate loop on raw re/im pairs; GCC
// does not inline std::complex multiplication without fast-math, and this
// convolution is the performance core of the whole engine.
TrigPoly product(const TrigPoly& u, const TrigPoly& v, int K_out) {
  const int Ku = u.K(), Kv = v.K();
  if (K_out < 0) K_out = Ku + Kv;
  std::vector<Complex> out(static_cast<size_t>(K_out) + 1, Complex{0.0, 0.0});
  const double* a = reinterpret_cast<const double*>(u.half().data());
  const double* b = reinterpret_cast<const double*>(v.half().data());

  // Mode 0: u0 v0 + sum_{m>=1} 2 Re(u[m] conj(v[m])) -- real by construction.
  {
    double acc = a[0] * b[0];
    const int mmax = std::min(Ku, Kv);
    for (int m = 1; m <= mmax; ++m) {
      acc += 2.0 * (a[2 * m] * b[2 * m] + a[2 * m + 1] * b[2 * m + 1]);
    }
    out[0] = Complex{acc, 0.0};
  }

  const int kmax = std::min(K_out, Ku + Kv);
  for (int k = 1; k <= kmax; ++k) {
    double re = 0.0, im = 0.0;
    // m in [1, min(Ku, Kv - k)]: conj(u[m]) * v[k + m].
    {
      const int hi = std::min(Ku, Kv - k);
      for (int m = 1; m <= hi; ++m) {
        const double ar = a[2 * m], ai = a[2 * m + 1];
        const double br = b[2 * (k + m)], bi = b[2 * (k + m) + 1];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
      }
    }
    // m in [max(0, k - Kv), min(k, Ku)]: u[m] * v[k - m].
    {
      const int lo = std::max(0, k - Kv), hi = std::min(k, Ku);
      for (int m = lo; m <= hi; ++m) {
        const double ar = a[2 * m], ai = a[2 * m + 1];
        const double br = b[2 * (k - m)], bi = b[2 * (k - m) + 1];
        re += ar * br - ai * bi;
        im += ar * bi + ai * br;
      }
    }
    // m in [k + 1, min(Ku, k + Kv)]: u[m] * conj(v[m - k]).
    {
      const int hi = std::min(Ku, k + Kv);
      for (int m = k + 1; m <= hi; ++m) {
        const double ar = a[2 * m], ai = a[2 * m + 1];
        const double br = b[2 * (m - k)], bi = b[2 * (m - k) + 1];
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
      }
    }
    out[static_cast<size_t>(k)] = Complex{re, im};
  }
  return TrigPoly::from_half(std::move(out));
}

std::vector<double> grid_values(const TrigPoly& u, int M) {
  if (M < 2 * u.K() + 1) {
    throw std::invalid_argument(
        "grid_values: need M >= 2K+1 samples to resolve bandwidth " +
        std::to_string(u.K()));
  }
  std::vector<double> vals(static_cast<size_t>(M));
  const int K = u.K();
  const double* c = reinterpret_cast<const double*>(u.half().data());
  for (int j = 0; j < M; ++j) {
    const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / M;
    // u(x) = c0 + 2 sum_{k>=1} Re(c_k e^{ikx}), accumulated with an
    // incremental rotation z_{k+1} = z_k * e^{ix} (error ~ K ulps).
    const double wr = std::cos(x), wi = std::sin(x);
    double zr = 1.0, zi = 0.0;
    double acc = c[0];
    for (int k = 1; k <= K; ++k) {
      const double nzr = zr * wr - zi * wi;
      const double nzi = zr * wi + zi * wr;
      zr = nzr;
      zi = nzi;
      acc += 2.0 * (c[2 * k] * zr - c[2 * k + 1] * zi);
    }
    vals[static_cast<size_t>(j)] = acc;
  }
  return vals;
}

TrigPoly from_grid(const std::vector<double>& samples, int K) {
  const int M = static_cast<int>(samples.size());
  if (M < 2 * K + 1) {
    throw std::invalid_argument("from_grid: need M >= 2K+1 samples");
  }
  std::vector<Complex> c(static_cast<size_t>(K) + 1, Complex{0.0, 0.0});
  for (int k = 0; k <= K; ++k) {
    double re = 0.0, im = 0.0;
    for (int j = 0; j < M; ++j) {
      const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / M;
      re += samples[static_cast<size_t>(j)] * std::cos(k * x);
      im -= samples[static_cast<size_t>(j)] * std::sin(k * x);
    }
    c[static_cast<size_t>(k)] = Complex{re / M, (k == 0) ? 0.0 : im / M};
  }
  return TrigPoly::from_half(std::move(c));
}

double mean(const TrigPoly& u) { return u.mean(); }

}  // namespace thinfilm
