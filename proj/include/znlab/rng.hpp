#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace znlab {

// Philox4x32-10 counter-based generator (Salmon et al. construction).
// The k-th block is a pure function of (counter, key), so any draw can be
// produced directly from (master_seed, path_index, step_index) with no
// sequential state — the property the parallel reproducibility contract needs.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += w0;
                key[1] += w1;
            }
            const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

namespace detail {
inline double to_unit_open(std::uint64_t bits) {
    // (0, 1), 53 significant bits, never exactly 0 or 1
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}
}  // namespace detail

// Two standard normal draws for (seed, path, pair_index) via Box-Muller on one
// Philox block. pair_index = step_index / 2; lane = step_index % 2.
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path,
                                         std::uint64_t pair_index) {
    const auto x = Philox4x32::block(
        {static_cast<std::uint32_t>(pair_index), static_cast<std::uint32_t>(pair_index >> 32),
         static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    const std::uint64_t a = (static_cast<std::uint64_t>(x[0]) << 32) | x[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(x[2]) << 32) | x[3];
    const double u1 = detail::to_unit_open(a);
    const double u2 = detail::to_unit_open(b);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

inline double standard_normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step) {
    return normal_pair(seed, path, step >> 1)[step & 1];
}

// Brownian increment over a step of length dt.
inline double brownian_increment(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                 double dt) {
    return std::sqrt(dt) * standard_normal(seed, path, step);
}

}  // namespace znlab
