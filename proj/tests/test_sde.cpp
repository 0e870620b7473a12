#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "znlab/bounds.hpp"
#include "znlab/experiments.hpp"
#include "znlab/mollifier.hpp"
#include "znlab/sde.hpp"
#include "znlab/selfcheck.hpp"

using namespace znlab;

namespace {
SimConfig quick_config(double gamma, double epsilon, double dt, double T, std::uint64_t seed) {
    SimConfig c;
    c.gamma = gamma;
    c.epsilon = epsilon;
    c.a_exponent = gamma == 0.0 ? 0.5 : 0.75;
    c.dt = dt;
    c.horizon = T;
    c.master_seed = seed;
    c.n_paths = 1;
    return c;
}
}  // namespace

TEST_CASE("unperturbed scheme stays pinned at the singular point") {
    const auto c = quick_config(0.0, 0.0, 1e-2, 1.0, 1);
    const PathSample path = simulate_path(c, 0.0, 0);
    for (const double v : path.x) CHECK(v == 0.0);
    CHECK(path.occupation.back() == 0.0);
    CHECK(path.m_sgn.back() == 0.0);
}

TEST_CASE("diagnostic start off the origin integrates the unit drift exactly") {
    auto c = quick_config(0.0, 0.0, 0.015625, 1.0, 1);  // power-of-two step
    const double x0 = 0.25;
    const PathSample path = simulate_path(c, 0.0, 0, x0);
    for (std::size_t k = 0; k < path.x.size(); ++k)
        CHECK(path.x[k] == x0 + static_cast<double>(k) * c.dt);  // bit-exact
}

TEST_CASE("initial conditions and basic path invariants") {
    const auto c = quick_config(0.0, 0.1, 1e-3, 1.0, 7);
    for (std::uint64_t p = 0; p < 8; ++p) {
        const PathSample path = simulate_path(c, 0.0, p);
        CHECK(path.x[0] == 0.0);
        CHECK(path.w[0] == 0.0);
        CHECK(path.m_sgn[0] == 0.0);
        CHECK(path.m_moll[0] == 0.0);
        CHECK(path.occupation[0] == 0.0);
        CHECK_FALSE(path.aborted);
        for (std::size_t k = 1; k < path.x.size(); ++k) {
            // occupation is nondecreasing and bounded by elapsed time
            CHECK(path.occupation[k] >= path.occupation[k - 1]);
            CHECK(path.occupation[k] <= path.times[k] + 1e-12);
            // m_moll increments are dominated by the Brownian increments
            const double dm = std::fabs(path.m_moll[k] - path.m_moll[k - 1]);
            const double dw = std::fabs(path.w[k] - path.w[k - 1]);
            CHECK(dm <= dw + 1e-12);
        }
        // gamma = 0: the mollified integrand degenerates to sgn
        for (std::size_t k = 0; k < path.x.size(); ++k)
            CHECK(path.m_moll[k] == path.m_sgn[k]);
    }
}

TEST_CASE("predictable quadratic variation of m_moll stays below t") {
    auto c = quick_config(0.5, 0.1, 1e-3, 0.5, 41);
    const auto params = theorem_params(c.gamma, c.epsilon, c.a_exponent, c.horizon);
    for (std::uint64_t p = 0; p < 8; ++p) {
        const PathSample path = simulate_path(c, params.delta, p);
        double qv = 0.0;
        for (std::size_t k = 0; k + 1 < path.x.size(); ++k) {
            const double d1 = smoothed_abs_d1(path.x[k], params.delta);
            qv += d1 * d1 * (path.times[k + 1] - path.times[k]);
            CHECK(qv <= path.times[k + 1] + 1e-12);
        }
    }
}

TEST_CASE("discrete bound |X_t| <= t + eps |W_t| holds at every grid point") {
    const auto c = quick_config(0.0, 0.3, 1e-3, 1.0, 11);
    for (std::uint64_t p = 0; p < 32; ++p) {
        const PathSample path = simulate_path(c, 0.0, p);
        for (std::size_t k = 0; k < path.x.size(); ++k) {
            const double rhs = path.times[k] + c.epsilon * std::fabs(path.w[k]);
            CHECK(std::fabs(path.x[k]) <= rhs + 1e-10 * (1.0 + rhs));
        }
    }
}

TEST_CASE("discrete bound |X_t| >= occupation - eps |m_sgn| (Tanaka residual >= 0)") {
    const auto c = quick_config(0.0, 0.2, 1e-3, 1.0, 13);
    for (std::uint64_t p = 0; p < 32; ++p) {
        const PathSample path = simulate_path(c, 0.0, p);
        const auto residual = tanaka_residual(path, c);
        double prev = 0.0;
        for (std::size_t k = 0; k < residual.size(); ++k) {
            CHECK(residual[k] >= -1e-12);
            CHECK(residual[k] >= prev - 1e-12);  // nondecreasing
            prev = residual[k];
            const double rhs = path.occupation[k] - c.epsilon * std::fabs(path.m_sgn[k]);
            CHECK(std::fabs(path.x[k]) >= rhs - 1e-10 * (1.0 + path.times[k]));
        }
    }
}

TEST_CASE("tanaka_residual rejects gamma > 0") {
    const auto c = quick_config(0.5, 0.1, 1e-3, 0.5, 17);
    const auto params = theorem_params(c.gamma, c.epsilon, c.a_exponent, c.horizon);
    const PathSample path = simulate_path(c, params.delta, 0);
    CHECK_THROWS_AS(tanaka_residual(path, c), std::invalid_argument);
}

TEST_CASE("tanaka oracle suite (degenerate, monotone, rescaling identity)") {
    for (const auto& r : tanaka_oracle_checks()) {
        INFO(r.name, ": ", r.details);
        CHECK(r.pass);
    }
}

TEST_CASE("pathwise lower bound margin is positive at the start and rarely negative") {
    const auto c = quick_config(0.5, 0.1, 1e-3, 0.5, 19);
    const auto params = theorem_params(c.gamma, c.epsilon, c.a_exponent, c.horizon);
    REQUIRE(params.delta > 0.0);

    // at t = 0 the margin is |0|_delta > 0
    CHECK(smoothed_abs(0.0, params.delta) > 0.0);

    const auto calib = calibrate_pathwise_tol(c, params, 20);
    CHECK(calib.tol > 0.0);
    CHECK(calib.floor == doctest::Approx(c.epsilon * std::sqrt(c.dt)));

    int ok = 0;
    const int n = 40;
    for (std::uint64_t p = 0; p < n; ++p) {
        const PathSample path = simulate_path(c, params.delta, p);
        const double margin = pathwise_lower_bound_check(path, params);
        CHECK(margin <= smoothed_abs(0.0, params.delta) + 1e-12);  // includes t = 0
        if (margin >= -calib.tol) ++ok;
    }
    CHECK(ok >= static_cast<int>(0.95 * n));
}

TEST_CASE("pathwise check rejects gamma = 0 params") {
    const auto c = quick_config(0.0, 0.1, 1e-2, 0.5, 23);
    const auto params = theorem_params(0.0, c.epsilon, 0.5, c.horizon);
    const PathSample path = simulate_path(c, 0.0, 0);
    CHECK_THROWS_AS(pathwise_lower_bound_check(path, params), std::invalid_argument);
}

TEST_CASE("matched refinement does not create violations") {
    const auto c = quick_config(0.5, 0.1, 1e-3, 0.5, 29);
    const auto params = theorem_params(c.gamma, c.epsilon, c.a_exponent, c.horizon);
    const auto calib = calibrate_pathwise_tol(c, params, 60);
    // halving the step must not make the worst violation worse
    CHECK(calib.worst_violation_half <= calib.worst_violation_dt + 1e-12);
}

TEST_CASE("partial final step is flagged and lands exactly on T") {
    const TimeGrid grid = make_time_grid(1.0, 0.3);
    CHECK(grid.has_partial);
    CHECK(grid.n_full == 3);
    CHECK(grid.n_steps() == 4);
    CHECK(grid.time_at(grid.n_points() - 1) == doctest::Approx(1.0).epsilon(1e-15));

    const TimeGrid exact = make_time_grid(1.0, 1e-4);
    CHECK_FALSE(exact.has_partial);
    CHECK(exact.n_full == 10000);

    auto c = quick_config(0.0, 0.1, 0.3, 1.0, 31);
    const PathSample path = simulate_path(c, 0.0, 0);
    CHECK(path.times.size() == 5);
    CHECK(path.times.back() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("non-finite state aborts the path with a diagnostic") {
    auto c = quick_config(0.99, 0.0, 1.0, 30.0, 37);
    const PathSample path = simulate_path(c, 0.0, 0, 1.79e308);
    CHECK(path.aborted);
    CHECK(path.abort_step > 0);
    CHECK(path.x.size() == static_cast<std::size_t>(path.abort_step + 1));
}

TEST_CASE("config validation: errors and step-size warnings") {
    SimConfig c;
    c.gamma = 0.5;
    c.epsilon = 0.1;
    c.a_exponent = 0.75;
    c.dt = 1e-4;
    c.horizon = 1.0;
    c.n_paths = 100;
    CHECK(validate_config(c).ok());

    SimConfig bad = c;
    bad.a_exponent = 0.5;  // inadmissible for gamma = 0.5
    CHECK_FALSE(validate_config(bad).ok());
    bad = c;
    bad.gamma = 1.0;
    CHECK_FALSE(validate_config(bad).ok());
    bad = c;
    bad.dt = 2.0;
    CHECK_FALSE(validate_config(bad).ok());
    bad = c;
    bad.antithetic = true;
    bad.n_paths = 101;
    CHECK_FALSE(validate_config(bad).ok());

    SimConfig warned = c;
    warned.dt = 0.05;  // dt > eps^2 and eps sqrt(dt) > delta/10
    const auto check = validate_config(warned);
    CHECK(check.ok());
    CHECK(check.warnings.size() == 2);
}

TEST_CASE("antithetic draws mirror the even path exactly") {
    SimConfig c;
    c.gamma = 0.0;
    c.epsilon = 0.1;
    c.a_exponent = 0.5;
    c.dt = 1e-2;
    c.horizon = 0.5;
    c.antithetic = true;
    for (std::uint64_t step = 0; step < 50; ++step)
        CHECK(path_normal(c, 3, step) == -path_normal(c, 2, step));

    const PathSample even = simulate_path(c, 0.0, 2);
    const PathSample odd = simulate_path(c, 0.0, 3);
    for (std::size_t k = 0; k < even.x.size(); ++k) {
        CHECK(odd.x[k] == -even.x[k]);
        CHECK(odd.w[k] == -even.w[k]);
        CHECK(odd.m_sgn[k] == even.m_sgn[k]);   // sign flips twice
        CHECK(odd.m_moll[k] == even.m_moll[k]);
        CHECK(odd.occupation[k] == even.occupation[k]);
    }
}
