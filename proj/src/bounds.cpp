#include "znlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace znlab {

double TheoremParams::lemma_slope() const {
    if (is_gamma_zero()) return 1.0;  // occupation integral grows at unit rate
    return std::pow(delta, gamma) / std::pow(2.0, gamma + 1.0);
}

double doob_event_bound(double epsilon, double a_exponent, double horizon) {
    return 2.0 * horizon * std::pow(epsilon, 2.0 * (1.0 - a_exponent));
}

namespace {
void fill_informative(TheoremParams& p) {
    p.informative_t_bar = p.t_bar <= p.horizon;
    p.informative_alpha = p.alpha < 1.0;
    p.informative_h = p.h < extremal_value(p.gamma_exp(), p.horizon);
}
}  // namespace

TheoremParams params_gamma0(double epsilon, double a_exponent, double horizon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("params_gamma0: epsilon must be > 0");
    if (!(a_exponent > 0.0 && a_exponent < 1.0))
        throw std::invalid_argument("params_gamma0: a must lie in (0, 1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("params_gamma0: T must be > 0");

    TheoremParams p;
    p.gamma = 0.0;
    p.epsilon = epsilon;
    p.a_exponent = a_exponent;
    p.horizon = horizon;
    p.eta = std::pow(epsilon, a_exponent);
    p.delta = 0.0;
    p.c1 = 0.0;
    p.h = p.eta;
    p.t_bar = 2.0 * p.h;
    p.alpha = doob_event_bound(epsilon, a_exponent, horizon);
    p.alpha_paper_variant = p.alpha;  // the gamma = 0 text prints the derived value
    p.r_lower = EnvelopeShift{p.h};
    p.r_upper = EnvelopeShift{-p.h};
    fill_informative(p);
    return p;
}

TheoremParams params_gamma_pos(double gamma, double epsilon, double a_exponent, double horizon) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("params_gamma_pos: gamma must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("params_gamma_pos: epsilon must be > 0");
    const double a_min = 2.0 * gamma / (1.0 + gamma);
    if (!(a_exponent > a_min && a_exponent < 1.0))
        throw std::invalid_argument("params_gamma_pos: a must lie in (2 gamma/(1+gamma), 1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("params_gamma_pos: T must be > 0");

    TheoremParams p;
    p.gamma = gamma;
    p.epsilon = epsilon;
    p.a_exponent = a_exponent;
    p.horizon = horizon;
    p.eta = std::pow(epsilon, a_exponent);
    p.c1 = std::pow(2.0, (gamma - 2.0) / (1.0 + gamma));
    p.delta = p.c1 * std::pow(epsilon, 2.0 / (1.0 + gamma));
    p.t_bar = std::pow(2.0, gamma + 1.0) * (2.0 * p.delta + 2.0 * p.eta) / std::pow(p.delta, gamma);
    p.alpha = doob_event_bound(epsilon, a_exponent, horizon);
    p.alpha_paper_variant = 2.0 * horizon * std::pow(epsilon, 2.0 - a_exponent);
    const GammaExponent g{gamma};
    p.r_lower = shift_r(g, p.t_bar, p.delta);
    p.r_upper = shift_r(g, 0.0, p.eta);
    p.h = tube_halfwidth(g, p.r_lower, p.r_upper, horizon);
    p.discrepancies = {
        "alpha: implemented 2*T*eps^(2(1-a)) (Doob + isometry); text prints 2*T*eps^(2-a)",
        "envelope shift: implemented t_bar - delta^(1-gamma)/(1-gamma) (solves H(t_bar - R) = "
        "delta); text prints delta^(1+gamma)/(1-gamma)"};
    fill_informative(p);
    return p;
}

TheoremParams theorem_params(double gamma, double epsilon, double a_exponent, double horizon) {
    return gamma == 0.0 ? params_gamma0(epsilon, a_exponent, horizon)
                        : params_gamma_pos(gamma, epsilon, a_exponent, horizon);
}

double tube_halfwidth(GammaExponent gamma, EnvelopeShift r_lower, EnvelopeShift r_upper,
                      double horizon) {
    const double ht = extremal_value(gamma, horizon);
    const double gap_lower = std::fabs(ht - extremal_value(gamma, horizon - r_lower.r));
    const double gap_upper = std::fabs(extremal_value(gamma, horizon - r_upper.r) - ht);
    return std::max(gap_lower, gap_upper);
}

double balance_residual(double gamma, double epsilon, double delta) {
    return 3.0 * epsilon * epsilon / (8.0 * delta) - std::pow(delta, gamma) / std::pow(2.0, gamma)
           - std::pow(delta, gamma) / std::pow(2.0, gamma + 1.0);
}

VacuityScan scan_vacuity(double gamma, double horizon, double dt_floor, int a_grid) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("scan_vacuity: gamma must lie in (0, 1)");
    VacuityScan scan;
    scan.eps_min = std::sqrt(dt_floor);
    const double a_min = 2.0 * gamma / (1.0 + gamma);
    double best_score = std::numeric_limits<double>::infinity();
    scan.fully_vacuous = true;
    for (int i = 1; i < a_grid; ++i) {
        const double a = a_min + (1.0 - a_min) * static_cast<double>(i) / a_grid;
        const TheoremParams p = params_gamma_pos(gamma, scan.eps_min, a, horizon);
        const double score = std::max(p.t_bar / horizon, p.alpha);
        if (score < best_score) {
            best_score = score;
            scan.best_a = a;
            scan.t_bar_over_T = p.t_bar / horizon;
            scan.alpha = p.alpha;
            scan.h_over_HT = p.h / extremal_value(GammaExponent{gamma}, horizon);
        }
        if (p.informative_t_bar && p.informative_alpha) scan.fully_vacuous = false;
    }
    return scan;
}

}  // namespace znlab
