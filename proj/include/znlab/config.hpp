#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace znlab {

// One experiment's full parameter set. master_seed plus a path index determine
// every random draw, so results are independent of scheduling and worker count.
struct SimConfig {
    double gamma = 0.0;
    double epsilon = 0.05;
    double a_exponent = 0.5;
    double horizon = 1.0;
    double dt = 1e-4;
    std::int64_t n_paths = 10000;
    std::uint64_t master_seed = 42;
    bool antithetic = false;  // pairs (2i, 2i+1) with negated increments
};

struct ConfigCheck {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;  // step-size rules of thumb, non-fatal
    bool ok() const { return errors.empty(); }
};

// Validates ranges, Lemma-1 admissibility of a, and the step-size rules
// (warn unless dt <= eps^2, and for gamma > 0 unless eps*sqrt(dt) <= delta/10).
ConfigCheck validate_config(const SimConfig& config);

// Flat `key = value` config text, one pair per line, `#` comments. Returns
// pairs in file order; throws std::invalid_argument with a line number on
// malformed input.
std::vector<std::pair<std::string, std::string>> parse_flat_config(const std::string& text);

// Applies file values to the fields not already pinned by command-line flags
// (the `overridden` set holds the keys to skip). Unknown keys throw.
void apply_flat_config(SimConfig& config,
                       const std::vector<std::pair<std::string, std::string>>& entries,
                       const std::vector<std::string>& overridden);

// Time grid over [0, T]: n_full steps of length dt plus an optional shorter
// final step when T is not an integer multiple of dt (allowed and flagged).
struct TimeGrid {
    double dt = 0.0;
    std::int64_t n_full = 0;
    double remainder = 0.0;
    bool has_partial = false;

    std::int64_t n_steps() const { return n_full + (has_partial ? 1 : 0); }
    std::int64_t n_points() const { return n_steps() + 1; }
    double step_length(std::int64_t k) const { return k < n_full ? dt : remainder; }
    double time_at(std::int64_t k) const;
};

TimeGrid make_time_grid(double horizon, double dt);

}  // namespace znlab
