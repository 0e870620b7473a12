#include "znlab/mollifier.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace znlab {

double MollifierBoundReport::worst() const {
    return std::min({gap_margin, d1_margin, convexity_margin, signed_half_margin,
                     signed_one_margin, plateau_margin});
}

MollifierBoundReport verify_mollifier_bounds(double delta, int grid_points) {
    if (!(delta > 0.0)) throw std::invalid_argument("verify_mollifier_bounds: delta must be > 0");
    if (grid_points < 100) throw std::invalid_argument("verify_mollifier_bounds: need >= 100 grid points");

    MollifierBoundReport rep{};
    rep.gap_margin = rep.d1_margin = rep.signed_half_margin = rep.plateau_margin =
        std::numeric_limits<double>::infinity();
    rep.convexity_margin = std::numeric_limits<double>::infinity();
    rep.signed_one_margin = 0.0;
    rep.gap_argmax = 0.0;

    double worst_gap = -1.0;
    auto probe = [&](double x) {
        const double s = smoothed_abs(x, delta);
        const double d1 = smoothed_abs_d1(x, delta);
        const double d2 = smoothed_abs_d2(x, delta);
        const double gap = std::fabs(std::fabs(x) - s);
        if (gap > worst_gap) {
            worst_gap = gap;
            rep.gap_argmax = x;
        }
        rep.gap_margin = std::min(rep.gap_margin, delta - gap);
        rep.d1_margin = std::min(rep.d1_margin, 1.0 - std::fabs(d1));
        rep.convexity_margin = std::min(rep.convexity_margin, d2);
        const double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        if (std::fabs(x) >= 0.5 * delta)
            rep.signed_half_margin = std::min(rep.signed_half_margin, d1 * sgn - 0.5);
        if (std::fabs(x) >= delta)
            rep.signed_one_margin = std::min(rep.signed_one_margin, -std::fabs(d1 * sgn - 1.0));
        if (std::fabs(x) <= 0.5 * delta)
            rep.plateau_margin = std::min(rep.plateau_margin, d2 - 0.75 / delta);
    };

    const double lo = -2.0 * delta, hi = 2.0 * delta;
    for (int i = 0; i < grid_points; ++i)
        probe(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1));

    std::mt19937_64 rng(0x6d6f6c6cu);  // fixed seed: report must be deterministic
    std::uniform_real_distribution<double> unif(lo, hi);
    for (int i = 0; i < grid_points; ++i) probe(unif(rng));

    return rep;
}

}  // namespace znlab
