#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "znlab/bounds.hpp"
#include "znlab/config.hpp"
#include "znlab/rng.hpp"

namespace znlab {

// sgn(0) = 0, matching the ODE's indicator definition; the unperturbed scheme
// started at the singular point therefore stays pinned there.
inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline double drift_value(GammaExponent gamma, double x) {
    if (gamma.is_zero()) return sign_of(x);
    const double ax = std::fabs(x);
    const double mag = gamma.value == 0.5 ? std::sqrt(ax) : std::pow(ax, gamma.value);
    return sign_of(x) * mag;
}

// Normal draw for one Euler step; in antithetic mode odd paths mirror the
// preceding even path's draws with flipped sign.
inline double path_normal(const SimConfig& config, std::uint64_t path, std::uint64_t step) {
    if (config.antithetic && (path & 1u))
        return -standard_normal(config.master_seed, path - 1, step);
    return standard_normal(config.master_seed, path, step);
}

// One trajectory on the full grid with every accumulated functional the proofs
// reference. Left-point (Ito) rule for all integrals.
struct PathSample {
    std::vector<double> times;
    std::vector<double> x;           // state X
    std::vector<double> w;           // driving Brownian path W
    std::vector<double> m_sgn;       // int_0^t sgn(X) dW
    std::vector<double> m_moll;      // int_0^t d/dx|X|_delta dW  (= m_sgn when delta = 0)
    std::vector<double> occupation;  // int_0^t 1{X != 0} ds
    bool aborted = false;            // non-finite state encountered
    std::int64_t abort_step = -1;
};

// Explicit Euler-Maruyama for dX = sgn(X)|X|^gamma dt + eps dW, X_0 = x0.
// x0 != 0 is a diagnostic mode for scheme validation only. delta feeds the
// m_moll integrand; pass params.delta (0 for gamma = 0, where the integrand
// degenerates to sgn and m_moll coincides with m_sgn).
PathSample simulate_path(const SimConfig& config, double delta, std::uint64_t path_index,
                         double x0 = 0.0);

// Discrete local-time estimate at 0 (gamma = 0 only; throws otherwise):
// L_t = |X_t| - occupation_t - eps * m_sgn_t. Nonnegative and nondecreasing
// for this scheme by construction (up to float rounding).
std::vector<double> tanaka_residual(const PathSample& path, const SimConfig& config);

// Running lower-bound inequality from the mollified expansion (gamma > 0;
// throws otherwise): min over grid points of
//   |X_t|_delta - slope * t + eps |m_moll_t|,  slope = delta^gamma / 2^(gamma+1).
// Negative values are discretization error, measured against the calibrated
// tolerance by the harness.
double pathwise_lower_bound_check(const PathSample& path, const TheoremParams& params);

}  // namespace znlab
