#include "thinfilm/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace thinfilm {

namespace {

// |k|^p with an exact repeated-multiplication path for small integer p, so
// the frozen-value tests see no libm rounding surprises.
double kpow(int k, double p) {
  const double rp = std::round(p);
  if (std::abs(p - rp) < 1e-12 && rp >= 0.0 && rp <= 16.0) {
    double out = 1.0;
    for (int j = 0; j < static_cast<int>(rp); ++j) out *= static_cast<double>(k);
    return out;
  }
  return std::pow(static_cast<double>(k), p);
}

void require_zero_mean(const TrigPoly& u, const char* what) {
  if (!u.is_zero_mean()) {
    throw std::invalid_argument(std::string(what) +
                                ": homogeneous norm requires a zero-mean input; "
                                "subtract the mean first");
  }
}

int default_sup_grid(int K) { return std::max(8 * K + 2, 4096); }

int default_quad_grid(int K) { return 4 * (K + 2); }

}  // namespace

double wiener_norm(const TrigPoly& u, double alpha) {
  require_zero_mean(u, "wiener_norm");
  if (alpha < 0.0) throw std::invalid_argument("wiener_norm: order must be >= 0");
  double acc = 0.0;
  for (int k = 1; k <= u.K(); ++k) {
    // The +/-k terms are equal; sum the stored half twice.
    acc += 2.0 * kpow(k, alpha) * std::abs(u.half()[static_cast<size_t>(k)]);
  }
  return acc;
}

double sobolev_norm(const TrigPoly& u, double s) {
  require_zero_mean(u, "sobolev_norm");
  if (s < 0.0) throw std::invalid_argument("sobolev_norm: order must be >= 0");
  double acc = 0.0;
  for (int k = 1; k <= u.K(); ++k) {
    acc += 2.0 * kpow(k, 2.0 * s) * std::norm(u.half()[static_cast<size_t>(k)]);
  }
  return std::sqrt(acc);
}

double sup_norm_deriv(const TrigPoly& u, int n, int M) {
  if (M == 0) M = default_sup_grid(u.K());
  const TrigPoly d = derivative(u, n);
  double best = 0.0;
  for (double v : grid_values(d, M)) best = std::max(best, std::abs(v));
  return best;
}

double lp4_norm_deriv(const TrigPoly& u, int n, int M) {
  if (M == 0) M = default_quad_grid(u.K());
  if (M < 4 * u.K() + 1) {
    throw std::invalid_argument("lp4_norm_deriv: need M >= 4K+1 for an exact rule");
  }
  const TrigPoly d = derivative(u, n);
  double acc = 0.0;
  for (double v : grid_values(d, M)) {
    const double v2 = v * v;
    acc += v2 * v2;
  }
  return std::pow(acc * (2.0 * std::numbers::pi / M), 0.25);
}

double l2_norm_quadrature(const TrigPoly& u, int M) {
  if (M == 0) M = default_quad_grid(u.K());
  if (M < 2 * u.K() + 1) {
    throw std::invalid_argument("l2_norm_quadrature: need M >= 2K+1 for an exact rule");
  }
  double acc = 0.0;
  for (double v : grid_values(u, M)) acc += v * v;
  return std::sqrt(acc * (2.0 * std::numbers::pi / M));
}

double grid_min(const TrigPoly& u, int M) {
  if (M == 0) M = default_sup_grid(u.K());
  const std::vector<double> vals = grid_values(u, M);
  return *std::min_element(vals.begin(), vals.end());
}

}  // namespace thinfilm
