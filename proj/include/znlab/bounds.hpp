#pragma once

#include <string>
#include <vector>

#include "znlab/trajectories.hpp"

namespace znlab {

// Every explicit constant of the selection theorem's proof, for one (gamma,
// epsilon, a, T). Vacuous regimes (t_bar > T, alpha >= 1, h >= H_gamma(T)) are
// legal outputs flagged by the informative_* fields, never errors.
struct TheoremParams {
    double gamma = 0.0;
    double epsilon = 0.0;
    double a_exponent = 0.0;
    double horizon = 0.0;

    double eta = 0.0;    // deviation threshold eps^a
    double delta = 0.0;  // mollification radius; 0 sentinel for gamma = 0
    double c1 = 0.0;     // balance constant 2^((gamma-2)/(1+gamma)); 0 for gamma = 0
    double t_bar = 0.0;  // selection time
    double alpha = 0.0;  // failure-probability bound 2 T eps^(2(1-a))
    double alpha_paper_variant = 0.0;  // the printed gamma > 0 variant 2 T eps^(2-a)
    double h = 0.0;      // tube half-width
    EnvelopeShift r_lower;  // shift of the lower envelope H(t - r)
    EnvelopeShift r_upper;  // shift of the upper envelope

    bool informative_t_bar = false;  // t_bar <= T
    bool informative_alpha = false;  // alpha < 1
    bool informative_h = false;      // h < H_gamma(T)

    std::vector<std::string> discrepancies;  // formulas where the derivation
                                             // disagrees with the printed text

    GammaExponent gamma_exp() const { return GammaExponent{gamma}; }
    bool is_gamma_zero() const { return gamma == 0.0; }
    // slope of the running lower bound |X|_delta >= slope * t - eps |m_moll|
    double lemma_slope() const;
};

// Union bound from Doob + Ito isometry on the two deviation events at
// threshold eta = eps^a: 2 eps^2 T / eta^2 = 2 T eps^(2(1-a)).
double doob_event_bound(double epsilon, double a_exponent, double horizon);

// gamma = 0 case: h = eps^a, t_bar = 2h, alpha = 2 T eps^(2(1-a)). The tube is
// | |X_t| - t | <= h; the equivalent envelope shifts are r_lower = +h,
// r_upper = -h (H_0 is linear).
TheoremParams params_gamma0(double epsilon, double a_exponent, double horizon);

// gamma in (0,1): delta = c1 eps^(2/(1+gamma)), t_bar = 2^(gamma+1)(2 delta +
// 2 eps^a)/delta^gamma, envelopes from the comparison lemma, h from
// tube_halfwidth. Requires 2 gamma/(1+gamma) < a < 1 (throws otherwise).
TheoremParams params_gamma_pos(double gamma, double epsilon, double a_exponent, double horizon);

// Dispatch on gamma.
TheoremParams theorem_params(double gamma, double epsilon, double a_exponent, double horizon);

// h = max over [0,T] of the two envelope gaps |H(t) - H(t - r)|. Both gaps are
// monotone in t (H is convex and nondecreasing), so the max sits at t = T;
// cross-checked against a grid maximum in the tests.
double tube_halfwidth(GammaExponent gamma, EnvelopeShift r_lower, EnvelopeShift r_upper,
                      double horizon);

// Residual of the balance equation 3 eps^2/(8 delta) - delta^gamma/2^gamma
// = delta^gamma/2^(gamma+1) whose root the closed-form delta hits.
double balance_residual(double gamma, double epsilon, double delta);

// Honest vacuity frontier for gamma > 0 at desk scale: over a grid of
// admissible exponents a, the most favorable (t_bar/T, alpha, h/H(T)) triple
// reachable with dt >= dt_floor (i.e. eps >= sqrt(dt_floor), where the
// diffusive-resolution rule dt <= eps^2 binds).
struct VacuityScan {
    double eps_min = 0.0;       // smallest eps reachable with dt >= dt_floor
    double best_a = 0.0;        // exponent minimizing max(t_bar/T, alpha)
    double t_bar_over_T = 0.0;  // at best_a, eps_min
    double alpha = 0.0;
    double h_over_HT = 0.0;
    bool fully_vacuous = false;  // no scanned a gives t_bar <= T and alpha < 1
};
VacuityScan scan_vacuity(double gamma, double horizon, double dt_floor, int a_grid = 512);

}  // namespace znlab
