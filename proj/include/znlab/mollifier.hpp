#pragma once

#include <cmath>
#include <cstdint>

namespace znlab {

// Smoothing kernel rho = psi/Z with psi = 1 on [-1/2, 1/2], quintic-smoothstep
// decay to 0 on [1/2, 3/4] (mirrored), 0 beyond. C^2, even, unit mass.
// Z = 5/4 exactly for this profile, so the plateau value is 1/Z = 4/5 >= 3/4.
struct MollifierKernel {
    double plateau_half_width = 0.5;
    double support_half_width = 0.75;
    double normalization = 1.25;  // Z
};

inline constexpr MollifierKernel kernel{};
inline constexpr double kernel_shoulder_width = 0.25;
// E|U| for U ~ rho; also the value of the smoothed abs at 0 (scale 1). 11/35 exactly.
inline constexpr double kernel_mean_abs = 11.0 / 35.0;

namespace detail {
// quintic smoothstep and its running integrals over [0, 1]
inline double qs(double s) { return ((6.0 * s - 15.0) * s + 10.0) * s * s * s; }
inline double qs_int(double s) { return ((s - 3.0) * s + 2.5) * s * s * s * s; }         // int_0^s qs
inline double qs_mom(double s) { return (((6.0 / 7.0) * s - 2.5) * s + 2.0) * s * s * s * s * s; }  // int_0^s u*qs(u)

// running integral of psi over [0, u], u >= 0
inline double psi_int(double u) {
    if (u <= 0.5) return u;
    if (u >= 0.75) return 0.625;
    const double s = (u - 0.5) / kernel_shoulder_width;
    return 0.5 + kernel_shoulder_width * (s - qs_int(s));
}
// running integral of u*psi(u) over [0, u]
inline double psi_mom(double u) {
    if (u <= 0.5) return 0.5 * u * u;
    if (u >= 0.75) return 11.0 / 56.0;
    const double s = (u - 0.5) / kernel_shoulder_width;
    const double w = kernel_shoulder_width;
    return 0.125 + w * (0.5 * (s - qs_int(s)) + w * (0.5 * s * s - qs_mom(s)));
}
}  // namespace detail

// rho(u); plateau value 1/Z on [-1/2, 1/2], zero outside [-3/4, 3/4].
inline double kernel_density(double u) {
    const double a = std::fabs(u);
    if (a >= kernel.support_half_width) return 0.0;
    const double inv_z = 1.0 / kernel.normalization;
    if (a <= kernel.plateau_half_width) return inv_z;
    return inv_z * (1.0 - detail::qs((a - 0.5) / kernel_shoulder_width));
}

// F(u) = int_{-inf}^u rho; even kernel, so F(0) = 1/2 and F(-u) = 1 - F(u).
inline double kernel_cdf(double u) {
    if (u >= kernel.support_half_width) return 1.0;
    if (u <= -kernel.support_half_width) return 0.0;
    const double inv_z = 1.0 / kernel.normalization;
    if (u >= 0.0) return 0.5 + inv_z * detail::psi_int(u);
    return 0.5 - inv_z * detail::psi_int(-u);
}

namespace detail {
// M(xi) = int_{-inf}^{xi} u rho(u) du; even in xi, M(+-3/4 and beyond) = 0.
inline double kernel_first_moment(double xi) {
    const double inv_z = 1.0 / kernel.normalization;
    return inv_z * (psi_mom(std::fabs(xi)) - 11.0 / 56.0);
}
// smoothed absolute value at scale 1, evaluated on the magnitude so that
// evenness is bit-exact: g(xi) = E|xi - U| = |xi|(2F(|xi|)-1) - 2M(|xi|)
inline double smoothed_abs_unit(double xi) {
    const double a = std::fabs(xi);
    return a * (2.0 * kernel_cdf(a) - 1.0) - 2.0 * kernel_first_moment(a);
}
// 2F(u)-1 for u >= 0 (the odd part of the derivative)
inline double d1_magnitude(double u) {
    if (u >= kernel.support_half_width) return 1.0;
    return 2.0 * (1.0 / kernel.normalization) * psi_int(u);
}
}  // namespace detail

// |x|_delta = int rho(u) |x - delta u| du; equals |x| exactly outside the
// kernel support, and delta * 11/35 at the origin.
inline double smoothed_abs(double x, double delta) {
    return delta * detail::smoothed_abs_unit(x / delta);
}

// d/dx |x|_delta = 2 F(x/delta) - 1; in [-1, 1], = sgn(x) for |x| >= delta.
// Assembled as sgn(x) * (2F(|x|/delta) - 1) so oddness is bit-exact.
inline double smoothed_abs_d1(double x, double delta) {
    const double mag = detail::d1_magnitude(std::fabs(x) / delta);
    return x > 0.0 ? mag : (x < 0.0 ? -mag : 0.0);
}

// d^2/dx^2 |x|_delta = 2 rho(x/delta) / delta; >= 0, and 8/(5 delta) on the plateau.
inline double smoothed_abs_d2(double x, double delta) {
    return 2.0 * kernel_density(x / delta) / delta;
}

// Worst margins of the five smoothed-abs inequalities on a grid over
// [-2 delta, 2 delta] plus random points. All must be >= -1e-12.
struct MollifierBoundReport {
    double gap_margin;          // delta - max | |x| - |x|_delta |
    double d1_margin;           // 1 - max |d1|
    double convexity_margin;    // min d2
    double signed_half_margin;  // min over |x| >= delta/2 of d1*sgn(x) - 1/2
    double signed_one_margin;   // -max over |x| >= delta  of |d1*sgn(x) - 1|
    double plateau_margin;      // min over |x| <= delta/2 of d2 - 3/(4 delta)
    double gap_argmax;          // location of the worst | |x| - |x|_delta |

    double worst() const;
};

MollifierBoundReport verify_mollifier_bounds(double delta, int grid_points);

}  // namespace znlab
