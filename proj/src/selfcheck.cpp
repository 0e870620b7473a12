#include "znlab/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "znlab/bounds.hpp"
#include "znlab/mollifier.hpp"
#include "znlab/rng.hpp"
#include "znlab/sde.hpp"
#include "znlab/trajectories.hpp"

namespace znlab {

namespace {
std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}
}  // namespace

std::vector<CheckResult> mollifier_bound_checks() {
    std::vector<CheckResult> results;
    for (const double delta : {1.0, 1e-3, 1e-6}) {
        const MollifierBoundReport rep = verify_mollifier_bounds(delta, 10000);
        const double grid_step = 4.0 * delta / 9999.0;
        const bool argmax_ok = std::fabs(rep.gap_argmax) <= 2.0 * grid_step;
        CheckResult r;
        r.name = "mollifier_bounds delta=" + num(delta);
        r.pass = rep.worst() >= -1e-12 && argmax_ok;
        r.details = "worst margin " + num(rep.worst()) + ", gap argmax " + num(rep.gap_argmax);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<CheckResult> comparison_bracketing_checks(int n_cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    int anchor_fail = 0, exact_fail = 0, lower_fail = 0, upper_fail = 0;
    double worst_anchor = 0.0;

    for (int c = 0; c < n_cases; ++c) {
        const double g = (c % 5 == 0) ? 0.0 : 0.95 * unif(rng);
        const GammaExponent gamma{g};
        const double t_bar = unif(rng);
        const double delta = std::exp(std::log(1e-4) + (std::log(0.5) - std::log(1e-4)) * unif(rng));
        const double span = 0.2 + 0.8 * unif(rng);
        const int n = 801;
        const double step = span / (n - 1);

        const EnvelopeShift r = shift_r(gamma, t_bar, delta);
        const double anchor = std::fabs(extremal_value(gamma, t_bar - r.r) - delta) / delta;
        worst_anchor = std::max(worst_anchor, anchor);
        if (anchor > 1e-12) ++anchor_fail;

        // exact ODE solution must satisfy both inequalities
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) f[i] = envelope_value(gamma, r, t_bar + i * step);
        auto res = comparison_verdicts(gamma, t_bar, delta, f, step);
        for (const auto v : res.verdicts)
            if (v != ComparisonVerdict::both) {
                ++exact_fail;
                break;
            }

        // lower family: forward construction with strictly positive slack
        std::vector<double> fl(n);
        fl[0] = delta * (1.0 + unif(rng));
        double slack = 0.05 + 0.45 * unif(rng);
        for (int i = 1; i < n; ++i) {
            if (i % 100 == 0) slack = 0.05 + 0.45 * unif(rng);
            const double fg = g == 0.0 ? 1.0 : std::pow(fl[i - 1], g);
            fl[i] = fl[i - 1] + step * (fg + slack * (1.0 + fg));
        }
        res = comparison_verdicts(gamma, t_bar, delta, fl, step);
        for (int i = 0; i < n; ++i) {
            const bool says_lower = res.verdicts[i] == ComparisonVerdict::lower
                                    || res.verdicts[i] == ComparisonVerdict::both;
            const bool bracketed = fl[i] >= envelope_value(gamma, r, t_bar + i * step) - res.quad_tol;
            if (!says_lower || !bracketed) {
                ++lower_fail;
                break;
            }
        }

        // upper family: decaying construction, clamped at zero
        std::vector<double> fu(n);
        fu[0] = delta * (0.3 + 0.7 * unif(rng));
        slack = 0.05 + 0.45 * unif(rng);
        for (int i = 1; i < n; ++i) {
            if (i % 100 == 0) slack = 0.05 + 0.45 * unif(rng);
            const double prev = fu[i - 1];
            const double fg = g == 0.0 ? (prev > 0.0 ? 1.0 : 0.0) : std::pow(prev, g);
            fu[i] = std::max(0.0, prev + step * (fg - slack * (1.0 + fg)));
        }
        res = comparison_verdicts(gamma, t_bar, delta, fu, step);
        for (int i = 0; i < n; ++i) {
            const bool says_upper = res.verdicts[i] == ComparisonVerdict::upper
                                    || res.verdicts[i] == ComparisonVerdict::both;
            const bool bracketed = fu[i] <= envelope_value(gamma, r, t_bar + i * step) + res.quad_tol;
            if (!says_upper || !bracketed) {
                ++upper_fail;
                break;
            }
        }
    }

    std::vector<CheckResult> out;
    out.push_back({"envelope_anchor H(t_bar - R) = delta",
                   anchor_fail == 0,
                   "worst relative error " + num(worst_anchor) + " over " + std::to_string(n_cases)
                       + " cases"});
    out.push_back({"comparison_oracle exact-solution equality", exact_fail == 0,
                   std::to_string(exact_fail) + " failures"});
    out.push_back({"comparison_bracketing lower envelope", lower_fail == 0,
                   std::to_string(lower_fail) + " failures"});
    out.push_back({"comparison_bracketing upper envelope", upper_fail == 0,
                   std::to_string(upper_fail) + " failures"});
    return out;
}

CheckResult balance_closed_form_check(int n_cases, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst = 0.0;
    for (int c = 0; c < n_cases; ++c) {
        const double g = 0.01 + 0.94 * unif(rng);
        const double eps = std::exp(std::log(1e-6) + (std::log(0.5) - std::log(1e-6)) * unif(rng));
        // log-space bisection; residual is decreasing in delta
        double lo = std::log(1e-30), hi = std::log(1e3);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (balance_residual(g, eps, std::exp(mid)) > 0.0 ? lo : hi) = mid;
        }
        const double bisected = std::exp(0.5 * (lo + hi));
        const double closed = std::pow(2.0, (g - 2.0) / (1.0 + g)) * std::pow(eps, 2.0 / (1.0 + g));
        worst = std::max(worst, std::fabs(closed - bisected) / closed);
    }
    return {"balance_equation closed form vs bisection", worst <= 1e-12,
            "worst relative error " + num(worst) + " over " + std::to_string(n_cases) + " cases"};
}

CheckResult rng_kat_check() {
    using A4 = std::array<std::uint32_t, 4>;
    bool ok = true;
    // published Philox4x32-10 vectors
    ok = ok && Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u})
                   == A4{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
    ok = ok
         && Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                              {0xffffffffu, 0xffffffffu})
                == A4{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};
    ok = ok
         && Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u})
                == A4{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    // the project's (seed, path, pair) mapping
    const auto z = normal_pair(42, 0, 0);
    ok = ok && std::fabs(z[0] - 0.8864975059014409) < 1e-12
         && std::fabs(z[1] - 0.4393560694379269) < 1e-12;
    const auto z2 = normal_pair(0xDEADBEEFCAFEF00Dull, 123456789, 987654321);
    ok = ok && std::fabs(z2[0] - (-1.2718285450945088)) < 1e-12
         && std::fabs(z2[1] - 0.6954839578021522) < 1e-12;
    return {"rng_known_answer vectors", ok, ok ? "all vectors match" : "mismatch"};
}

std::vector<CheckResult> tanaka_oracle_checks() {
    std::vector<CheckResult> out;

    {  // degenerate path: eps = 0 pins the scheme at the singular point
        SimConfig c;
        c.gamma = 0.0;
        c.epsilon = 0.0;
        c.dt = 1e-2;
        c.horizon = 1.0;
        const PathSample path = simulate_path(c, 0.0, 0);
        bool ok = true;
        for (const double v : path.x) ok = ok && v == 0.0;
        for (const double v : tanaka_residual(path, c)) ok = ok && v == 0.0;
        ok = ok && path.occupation.back() == 0.0;
        out.push_back({"tanaka degenerate path", ok, "X, L, occupation all identically 0"});
    }

    {  // nonnegative and nondecreasing (exact for the scheme, up to rounding)
        SimConfig c;
        c.gamma = 0.0;
        c.epsilon = 0.1;
        c.dt = 1e-3;
        c.horizon = 1.0;
        c.master_seed = 2024;
        bool ok = true;
        double worst = 0.0;
        for (std::uint64_t p = 0; p < 16; ++p) {
            const auto res = tanaka_residual(simulate_path(c, 0.0, p), c);
            for (std::size_t k = 0; k < res.size(); ++k) {
                worst = std::min(worst, res[k]);
                if (res[k] < -1e-12) ok = false;
                if (k > 0 && res[k] < res[k - 1] - 1e-12) ok = false;
            }
        }
        out.push_back({"tanaka residual nonnegative + nondecreasing", ok,
                       "min residual " + num(worst) + " over 16 paths"});
    }

    {  // exact rescaling: eps = 1/2 vs the unit-noise run on matched draws
        SimConfig c1;
        c1.gamma = 0.0;
        c1.epsilon = 0.5;
        c1.dt = 1e-3;
        c1.horizon = 0.5;
        c1.master_seed = 99;
        SimConfig c2 = c1;
        c2.epsilon = 1.0;
        c2.dt = c1.dt / (c1.epsilon * c1.epsilon);
        c2.horizon = c1.horizon / (c1.epsilon * c1.epsilon);
        bool ok = true;
        for (std::uint64_t p = 0; p < 4; ++p) {
            const auto r1 = tanaka_residual(simulate_path(c1, 0.0, p), c1);
            const auto r2 = tanaka_residual(simulate_path(c2, 0.0, p), c2);
            if (r1.size() != r2.size()) {
                ok = false;
                break;
            }
            for (std::size_t k = 0; k < r1.size(); ++k)
                if (r1[k] != 0.25 * r2[k]) ok = false;  // power-of-two scaling is bit-exact
        }
        out.push_back({"tanaka rescaling identity (matched draws)", ok,
                       "L(eps,dt) == eps^2 * L(1, dt/eps^2) bitwise"});
    }
    return out;
}

std::vector<CheckResult> selftest_checks() {
    std::vector<CheckResult> all;
    all.push_back(rng_kat_check());
    for (auto& r : mollifier_bound_checks()) all.push_back(std::move(r));
    for (auto& r : comparison_bracketing_checks(100, 0xC0FFEE)) all.push_back(std::move(r));
    all.push_back(balance_closed_form_check(100, 0xBEEF));
    for (auto& r : tanaka_oracle_checks()) all.push_back(std::move(r));
    return all;
}

}  // namespace znlab
