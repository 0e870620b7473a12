#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "znlab/mollifier.hpp"
#include "znlab/selfcheck.hpp"

using namespace znlab;

namespace {

// composite Simpson with explicit splits at the kernel knots (and the |.| kink)
double simpson(double (*f)(double, double), double param, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double acc = f(a, param) + f(b, param);
    for (int i = 1; i < n; ++i) acc += f(a + i * h, param) * (i % 2 == 0 ? 2.0 : 4.0);
    return acc * h / 3.0;
}

double density_at(double u, double) { return kernel_density(u); }
double convolution_integrand(double u, double xi) {
    return kernel_density(u) * std::fabs(xi - u);
}

double integrate_with_knots(double (*f)(double, double), double param, double a, double b,
                            std::vector<double> extra_knots) {
    std::vector<double> pts{a, b, -0.75, -0.5, 0.5, 0.75};
    for (const double k : extra_knots) pts.push_back(k);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = std::max(a, pts[i]), hi = std::min(b, pts[i + 1]);
        if (hi > lo) acc += simpson(f, param, lo, hi, 2000);
    }
    return acc;
}

}  // namespace

TEST_CASE("kernel density: support, plateau, evenness, normalization") {
    CHECK(kernel_density(2.0) == 0.0);
    CHECK(kernel_density(0.76) == 0.0);
    CHECK(kernel_density(0.0) == doctest::Approx(0.8).epsilon(1e-15));  // 1/Z with Z = 5/4
    CHECK(kernel_density(0.0) >= 0.75);
    CHECK(kernel_density(0.3) == kernel_density(0.0));  // plateau is flat
    CHECK(kernel_density(0.74) > 0.0);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.2, 1.2);
    for (int i = 0; i < 200; ++i) {
        const double u = unif(rng);
        CHECK(kernel_density(-u) == kernel_density(u));
        CHECK(kernel_density(u) >= 0.0);
    }

    // unit mass, via an independent quadrature of the density itself
    const double mass = integrate_with_knots(density_at, 0.0, -1.0, 1.0, {});
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    // normalization field matches the plateau value
    CHECK(1.0 / kernel.normalization == doctest::Approx(kernel_density(0.0)).epsilon(1e-15));
}

TEST_CASE("kernel cdf: endpoints, center, shoulder mass") {
    CHECK(kernel_cdf(-1.0) == 0.0);
    CHECK(kernel_cdf(-0.75) == 0.0);
    CHECK(kernel_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(kernel_cdf(1.0) == 1.0);
    CHECK(kernel_cdf(0.5) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(kernel_cdf(0.5) >= 7.0 / 8.0);
    // tail mass per side = (Z - 1)/(2Z) = 0.1
    const double z = kernel.normalization;
    CHECK(1.0 - kernel_cdf(0.5) == doctest::Approx((z - 1.0) / (2.0 * z)).epsilon(1e-13));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double u = unif(rng);
        const double quad = integrate_with_knots(density_at, 0.0, -1.0, u, {});
        CHECK(kernel_cdf(u) == doctest::Approx(quad).epsilon(1e-10));
        CHECK(kernel_cdf(-u) == doctest::Approx(1.0 - kernel_cdf(u)).epsilon(1e-13));
    }
}

TEST_CASE("smoothed_abs: exact tails, origin value, symmetry, homogeneity") {
    for (const double delta : {1.0, 0.37, 1e-3}) {
        CHECK(smoothed_abs(2.0 * delta, delta) == 2.0 * delta);
        CHECK(smoothed_abs(-2.0 * delta, delta) == 2.0 * delta);
        CHECK(smoothed_abs(delta, delta) == delta);  // support ends at 3/4 delta
        CHECK(smoothed_abs(0.0, delta) == doctest::Approx(delta * kernel_mean_abs).epsilon(1e-14));
        CHECK(smoothed_abs(0.0, delta) > 0.0);
        CHECK(smoothed_abs(0.0, delta) <= delta);
    }
    // origin value against the direct convolution oracle
    const double origin = integrate_with_knots(convolution_integrand, 0.0, -1.0, 1.0, {0.0});
    CHECK(smoothed_abs(0.0, 1.0) == doctest::Approx(origin).epsilon(1e-10));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 60; ++i) {
        const double xi = unif(rng);
        const double conv = integrate_with_knots(convolution_integrand, xi, -1.0, 1.0, {xi});
        CHECK(smoothed_abs(xi, 1.0) == doctest::Approx(conv).epsilon(1e-10));
        CHECK(smoothed_abs(-xi, 1.0) == smoothed_abs(xi, 1.0));  // bit-exact evenness
        for (const double delta : {0.3, 1e-4}) {
            const double x = unif(rng);
            CHECK(smoothed_abs(x, delta) == delta * smoothed_abs(x / delta, 1.0));
            CHECK(smoothed_abs_d1(x, delta) == smoothed_abs_d1(x / delta, 1.0));
            CHECK(smoothed_abs_d2(x, delta) == smoothed_abs_d2(x / delta, 1.0) / delta);
        }
    }
}

TEST_CASE("first derivative: oddness, saturation, plateau lower bound") {
    const double delta = 0.8;
    CHECK(smoothed_abs_d1(0.0, delta) == 0.0);
    CHECK(smoothed_abs_d1(delta, delta) == 1.0);
    CHECK(smoothed_abs_d1(-delta, delta) == -1.0);
    CHECK(smoothed_abs_d1(0.75 * delta, delta) == 1.0);  // saturates at the support edge
    CHECK(smoothed_abs_d1(0.5 * delta, delta) == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(smoothed_abs_d1(0.5 * delta, delta) >= 0.75);
    CHECK(smoothed_abs_d1(0.5 * delta, delta) >= 0.5);  // required signed bound

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        const double x = unif(rng);
        CHECK(smoothed_abs_d1(-x, delta) == -smoothed_abs_d1(x, delta));  // bit-exact
        CHECK(std::fabs(smoothed_abs_d1(x, delta)) <= 1.0);
    }
}

TEST_CASE("second derivative: support, plateau value, convexity") {
    const double delta = 0.6;
    CHECK(smoothed_abs_d2(2.0 * delta, delta) == 0.0);
    CHECK(smoothed_abs_d2(0.0, delta)
          == doctest::Approx(2.0 / (kernel.normalization * delta)).epsilon(1e-14));
    CHECK(smoothed_abs_d2(0.0, delta) >= 1.5 / delta);        // this kernel's plateau bound
    CHECK(smoothed_abs_d2(0.0, delta) >= 0.75 / delta);       // required plateau bound
    CHECK(smoothed_abs_d2(0.49 * delta, delta) >= 1.5 / delta);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-2.5, 2.5);
    for (int i = 0; i < 400; ++i) CHECK(smoothed_abs_d2(unif(rng), delta) >= 0.0);
}

TEST_CASE("derivative chain is consistent under finite differences") {
    // knots sit at |x| = delta/2 and 3 delta/4; probe away from them
    const double delta = 1.0;
    const std::vector<double> xs{0.05, 0.2, 0.42, 0.55, 0.65, 0.71, 0.9, 1.4,
                                 -0.1, -0.35, -0.6, -0.72, -1.1};
    const double h = 1e-6;
    for (const double x : xs) {
        const double fd1 = (smoothed_abs(x + h, delta) - smoothed_abs(x - h, delta)) / (2.0 * h);
        CHECK(fd1 == doctest::Approx(smoothed_abs_d1(x, delta)).epsilon(1e-6));
        const double fd2 =
            (smoothed_abs_d1(x + h, delta) - smoothed_abs_d1(x - h, delta)) / (2.0 * h);
        if (std::fabs(smoothed_abs_d2(x, delta)) > 1e-9)
            CHECK(fd2 == doctest::Approx(smoothed_abs_d2(x, delta)).epsilon(1e-6));
        else
            CHECK(std::fabs(fd2) < 1e-9);
    }
}

TEST_CASE("verify_mollifier_bounds: all five margins on three scales") {
    for (const double delta : {1.0, 1e-3, 1e-6}) {
        const auto rep = verify_mollifier_bounds(delta, 10000);
        CHECK(rep.gap_margin >= -1e-12);
        CHECK(rep.d1_margin >= -1e-12);
        CHECK(rep.convexity_margin >= -1e-12);
        CHECK(rep.signed_half_margin >= -1e-12);
        CHECK(rep.signed_one_margin >= -1e-12);
        CHECK(rep.plateau_margin >= -1e-12);
        CHECK(rep.worst() >= -1e-12);
        // the gap | |x| - |x|_delta | peaks at the origin
        CHECK(std::fabs(rep.gap_argmax) <= 2.0 * (4.0 * delta / 9999.0));
        // this kernel has concrete slack in the gap bound; the sampled margin
        // sits within one sample spacing of the exact value (the gap has a
        // unit-slope kink at 0, so the resolution enters linearly)
        CHECK(rep.gap_margin >= delta * (1.0 - kernel_mean_abs) - 1e-15 * delta);
        CHECK(rep.gap_margin <= delta * (1.0 - kernel_mean_abs) + 3e-4 * delta);
    }
    CHECK_THROWS_AS(verify_mollifier_bounds(0.0, 10000), std::invalid_argument);
    CHECK_THROWS_AS(verify_mollifier_bounds(1.0, 50), std::invalid_argument);
}

TEST_CASE("selfcheck mollifier suite passes") {
    for (const auto& r : mollifier_bound_checks()) {
        INFO(r.name, ": ", r.details);
        CHECK(r.pass);
    }
}
