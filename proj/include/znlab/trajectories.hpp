#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace znlab {

// Drift exponent of dX = sgn(X)|X|^gamma dt + eps dW, restricted to [0, 1).
struct GammaExponent {
    double value = 0.0;

    static GammaExponent checked(double g);
    bool is_zero() const { return value == 0.0; }
};

// Time shift r of the envelope t -> H_gamma(t - r).
struct EnvelopeShift {
    double r = 0.0;
};

// H_gamma(s) = [(1-gamma) s^+]^(1/(1-gamma)); the extremal solutions of the
// unperturbed ODE are exactly +-H_gamma(t - t0).
inline double extremal_value(GammaExponent gamma, double s) {
    const double sp = s > 0.0 ? s : 0.0;  // positive part absorbs fp-negative s
    if (gamma.is_zero()) return sp;
    const double g = gamma.value;
    return std::pow((1.0 - g) * sp, 1.0 / (1.0 - g));
}

inline double extremal_shifted(GammaExponent gamma, double t, double t0, int sign) {
    return static_cast<double>(sign) * extremal_value(gamma, t - t0);
}

// The unique shift r with H_gamma(t_bar - r) = delta, so that t -> H_gamma(t - r)
// solves x(t) = delta + integral_{t_bar}^t x(s)^gamma ds.
// Exponent note: the shift uses delta^(1-gamma)/(1-gamma); solving
// [(1-gamma)(t_bar - r)]^(1/(1-gamma)) = delta forces the 1-gamma exponent.
EnvelopeShift shift_r(GammaExponent gamma, double t_bar, double delta);

inline double envelope_value(GammaExponent gamma, EnvelopeShift shift, double t) {
    return extremal_value(gamma, t - shift.r);
}

enum class ComparisonVerdict { lower, upper, both, neither };

struct ComparisonResult {
    std::vector<ComparisonVerdict> verdicts;  // one per grid point
    double quad_tol = 0.0;                    // tolerance used: quad_tol_factor * step * (1 + max f^gamma)
};

inline constexpr double quad_tol_factor = 4.0;

// Trapezoid-rule oracle for the integral comparison: per grid point, does the
// sampled f satisfy f(t) >= delta + int_{t_bar}^t f^gamma (lower), <= (upper),
// both, or neither, within quad_tol. Grid is uniform over [t_bar, t_bar + step*(n-1)].
// Throws std::invalid_argument on empty grid, nonpositive step, or negative f.
ComparisonResult comparison_verdicts(GammaExponent gamma, double t_bar, double delta,
                                     std::span<const double> f, double step);

}  // namespace znlab
