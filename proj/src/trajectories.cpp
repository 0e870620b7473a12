#include "znlab/trajectories.hpp"

#include <stdexcept>

namespace znlab {

GammaExponent GammaExponent::checked(double g) {
    if (!(g >= 0.0 && g < 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1)");
    return GammaExponent{g};
}

EnvelopeShift shift_r(GammaExponent gamma, double t_bar, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("shift_r: delta must be > 0");
    if (!(t_bar >= 0.0)) throw std::invalid_argument("shift_r: t_bar must be >= 0");
    const double g = gamma.value;
    return EnvelopeShift{t_bar - std::pow(delta, 1.0 - g) / (1.0 - g)};
}

ComparisonResult comparison_verdicts(GammaExponent gamma, double t_bar, double delta,
                                     std::span<const double> f, double step) {
    if (f.empty()) throw std::invalid_argument("comparison_verdicts: empty grid");
    if (!(step > 0.0)) throw std::invalid_argument("comparison_verdicts: step must be > 0");

    const double g = gamma.value;
    double max_pow = 0.0;
    std::vector<double> fg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0) throw std::invalid_argument("comparison_verdicts: f must be nonnegative");
        fg[i] = gamma.is_zero() ? (f[i] > 0.0 ? 1.0 : 0.0) : std::pow(f[i], g);
        if (fg[i] > max_pow) max_pow = fg[i];
    }
    (void)t_bar;  // grid origin; the running integral only needs the step

    ComparisonResult out;
    out.quad_tol = quad_tol_factor * step * (1.0 + max_pow);
    out.verdicts.resize(f.size());

    double integral = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i > 0) integral += 0.5 * step * (fg[i - 1] + fg[i]);
        const double rhs = delta + integral;
        const bool lo = f[i] >= rhs - out.quad_tol;
        const bool hi = f[i] <= rhs + out.quad_tol;
        out.verdicts[i] = lo && hi ? ComparisonVerdict::both
                        : lo       ? ComparisonVerdict::lower
                        : hi       ? ComparisonVerdict::upper
                                   : ComparisonVerdict::neither;
    }
    return out;
}

}  // namespace znlab
