#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace znlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string details;
};

// The five smoothed-abs inequalities at delta in {1, 1e-3, 1e-6} on a 1e4
// grid plus 1e4 random points; margins must be >= -1e-12. Also checks that the
// worst | |x| - |x|_delta | gap sits at the origin.
std::vector<CheckResult> mollifier_bound_checks();

// Randomized comparison-lemma suite: the envelope anchor H(t_bar - R) = delta
// to 1e-12 relative, oracle equality on the exact ODE solution, and envelope
// bracketing (both directions) for constructed admissible f within the
// oracle's quadrature tolerance.
std::vector<CheckResult> comparison_bracketing_checks(int n_cases, std::uint64_t seed);

// Closed-form delta against log-space bisection of the balance equation,
// relative 1e-12, for n_cases random (gamma, epsilon).
CheckResult balance_closed_form_check(int n_cases, std::uint64_t seed);

// Counter-based generator known-answer vectors (published Philox4x32-10
// vectors plus the project key/counter mapping).
CheckResult rng_kat_check();

// gamma = 0 local-time residual: zero on the degenerate path, nonnegative and
// nondecreasing on sampled paths, and the exact power-of-two rescaling
// identity between (eps, dt, T) and (1, dt/eps^2, T/eps^2) on matched draws.
std::vector<CheckResult> tanaka_oracle_checks();

// Runs every oracle-only suite above (no Monte Carlo aggregation).
std::vector<CheckResult> selftest_checks();

}  // namespace znlab
