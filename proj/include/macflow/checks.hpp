#pragma once

// Randomized property suites for the pointwise inequalities the energy and
// stability arguments rest on. Each sample computes a margin lhs - rhs that
// must stay <= slack; the suite keeps the worst margin and the first
// violation with its inputs.

#include <cstdint>
#include <string>
#include <vector>

namespace macflow {

struct CheckResult {
  std::string name;
  std::string statement;
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  double slack = 0.0;
  double worst_margin = 0.0;
  /// Inputs and margin of the first violation; empty when none.
  std::string first_violation;

  bool passed() const noexcept { return violations == 0; }
};

/// Tr (I + a diag^2(U))^{1/2} <= Tr (I + a U U^T)^{1/2}; m in 1..5, a in (0, 100].
CheckResult check_trace_inequality(std::uint64_t samples, std::uint64_t seed);
/// Tr G(U) >= -m/4; tau in (0, 50].
CheckResult check_g_lower_bound(std::uint64_t samples, std::uint64_t seed);
/// Tr G(U) <= Tr G(diag U) + ||U - diag U||_F^2 / (2 tau); tau in (0, 50].
CheckResult check_g_upper_bound(std::uint64_t samples, std::uint64_t seed);
/// ||S_N(tau) V1 - S_N(tau) V2||_F <= e^{(1+3m) tau} ||V1 - V2||_F for
/// ||V_i||_F <= sqrt(m); tau in (0, 2].
CheckResult check_flow_lipschitz(std::uint64_t samples, std::uint64_t seed);
/// Central second difference of g (step 1e-3) stays <= 1.
CheckResult check_g_curvature(std::uint64_t samples, std::uint64_t seed);
/// X -> Tr (I + X X^T)^{1/2} is convex.
CheckResult check_trace_sqrt_convexity(std::uint64_t samples, std::uint64_t seed);

/// All suites above, each on its own substream of `seed`.
std::vector<CheckResult> run_all_checks(std::uint64_t samples, std::uint64_t seed);

}  // namespace macflow
