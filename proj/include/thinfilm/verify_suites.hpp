#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace thinfilm::verify {

// Outcome of one randomized suite.  `worst_slack` is the minimum over all
// trials of (rhs - lhs) for inequality suites, or of (tolerance - error) for
// equality-within-tolerance suites; a violation is a trial with negative
// slack.  When a suite has violations, `worst_case` carries a serialized
// counterexample (trial index, the two sides, and the offending coefficient
// data); otherwise it briefly describes the tightest draw.
struct SuiteResult {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string worst_case;
};

struct SuiteOptions {
  uint64_t seed = 20250821;
  int trials = 1000;
  // Test hook: every inequality constant (and equality tolerance) is scaled
  // by this factor before comparison.  1.0 is the honest setting; values
  // below 1 tighten the claims and must make suites fail, demonstrating the
  // suites are live.
  double tighten = 1.0;
};

// Functional-inequality suites over random trigonometric polynomials:
// product bound on the weighted Wiener scale, norm interpolation,
// Kolmogorov-Landau (first and iterated), the two L4 derivative bounds,
// the H4 embedding constant, and Parseval consistency of the quadrature L2
// norm with the coefficient-sum norm.
std::vector<SuiteResult> inequality_suites(const SuiteOptions& opt);

// Oracle-equivalence suites for the model right-hand sides: spectral
// assembly vs. physical-space quadrature assembly, split vs. unsplit
// formulations, exact mode-0 annihilation, and even-symmetry preservation,
// for both models and both variants.
std::vector<SuiteResult> oracle_suites(const SuiteOptions& opt);

bool all_pass(const std::vector<SuiteResult>& results);

}  // namespace thinfilm::verify
