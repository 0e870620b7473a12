#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "znlab/bounds.hpp"
#include "znlab/config.hpp"
#include "znlab/sde.hpp"

namespace znlab {

// Classification of one path against the theorem's statement. All booleans are
// evaluated on grid points with t in [t_bar, T]; deviation events over [0, T].
struct PathVerdict {
    int sign = 0;  // +1 / -1 when X keeps one strict sign on [t_bar, T], else 0 (undecided)
    bool tube_ok = false;       // | |X_t| - H(t) | <= h throughout
    bool envelope_ok = false;   // H(t - r_lower) <= |X_t| <= H(t - r_upper) throughout
    bool event_moll_ok = false; // sup_t eps |m_moll_t| <= eps^a
    bool event_w_ok = false;    // sup_t eps |W_t| <= eps^a
    bool sign_constant_after_tbar = false;
    double sup_tube_deviation = 0.0;
};

PathVerdict classify_path(const PathSample& path, const TheoremParams& params);

struct Frequency {
    double freq = 0.0;
    double wilson_lo = 0.0;  // 95% Wilson interval
    double wilson_hi = 0.0;
};

// Wilson score interval for k successes out of n at z standard normal quantiles.
Frequency wilson_frequency(std::int64_t k, std::int64_t n, double z = 1.959963984540054);

struct ToleranceCalibration {
    std::int64_t n_calib = 0;
    double worst_violation_dt = 0.0;    // worst pathwise-margin violation at dt
    double worst_violation_half = 0.0;  // same on the matched dt/2 refinement
    double order_estimate = 0.0;        // log2 ratio when both are nonzero
    double floor = 0.0;                 // eps * sqrt(dt), one Brownian increment
    double tol = 0.0;                   // 3 * max(violations, floor)
};

struct OccupationStats {
    double deficit_mean = 0.0;  // mean over paths of T - occupation_T
    double deficit_max = 0.0;
    double zero_point_fraction = 0.0;  // grid points (after step 1) with X exactly 0
};

struct ExperimentReport {
    SimConfig config;
    TheoremParams params;
    std::int64_t n_paths = 0;
    std::int64_t count_plus = 0;
    std::int64_t count_minus = 0;
    std::int64_t count_undecided = 0;

    Frequency tube_violation;
    Frequency envelope_violation;
    Frequency event_moll_violation;
    Frequency event_w_violation;
    Frequency event_union_violation;
    double alpha_bound = 0.0;  // doob_event_bound; vacuous when >= 1
    bool alpha_vacuous = false;

    double wasserstein_to_limit = 0.0;
    double mean_sup_tube_deviation = 0.0;
    std::int64_t dichotomy_violations = 0;  // tube_ok paths without constant sign
    std::int64_t aborted_paths = 0;

    OccupationStats occupation;

    // gamma = 0: exact discrete inequalities |X| >= occ - eps|m_sgn| (eq3) and
    // |X| <= t + eps|W| (eq4); violations counted beyond the rounding allowance.
    std::int64_t eq3_violations = 0;
    std::int64_t eq4_violations = 0;
    double eq3_worst_excess = 0.0;  // max observed LHS/RHS gap before allowance
    double eq4_worst_excess = 0.0;
    double fp_allowance_scale = 0.0;

    // gamma > 0: running lower-bound margins and the calibrated tolerance.
    double pathwise_margin_min = 0.0;
    double pathwise_ok_fraction = 0.0;  // margin >= -tol
    ToleranceCalibration calibration;
    // empirical selection time inf{t : |X_t| >= 2 delta} (horizon when never)
    double tbar_emp_mean = 0.0, tbar_emp_q05 = 0.0, tbar_emp_q50 = 0.0, tbar_emp_q95 = 0.0;

    // qualitative selection diagnostic independent of the theorem constants:
    // fraction of paths keeping one strict sign on [T/4, T]
    double sign_constant_after_quarter_fraction = 0.0;

    // martingale sanity: m_moll(T) across paths
    double m_moll_final_mean = 0.0;
    double m_moll_final_sd = 0.0;

    // tightness diagnostic: |X_t - X_s| <= C|t-s| + eps|W_t - W_s| holds for
    // the scheme with C = max drift magnitude along the run
    double max_abs_state = 0.0;
    double tightness_constant = 0.0;

    std::vector<std::string> warnings;

    // diagnostics only; excluded from serialized report files so that equal
    // seeds give byte-identical reports at any worker count
    double wall_seconds = 0.0;
    double steps_per_second = 0.0;
};

// Plot-ready table sampled on a fixed time subgrid.
struct PlotTable {
    std::vector<double> t, extremal, envelope_lower, envelope_upper, q05, q50, q95;
};

struct RunOptions {
    int threads = 0;        // 0 = hardware concurrency
    int plot_points = 0;    // > 0 enables the plot table (that many time slots)
    bool flip_sign = false; // negate every Brownian increment (symmetry checks)
};

struct RunOutput {
    ExperimentReport report;
    std::optional<PlotTable> plot;
};

// Simulates config.n_paths independent paths, classifies them on the fly, and
// merges per-block summaries in fixed index order: identical output bits for
// any worker count. Throws std::invalid_argument on config errors and
// std::runtime_error when more than 0.1% of paths abort non-finite.
RunOutput run_experiment(const SimConfig& config, const RunOptions& options = {});

// 1-Wasserstein distance between the empirical law of the final values and the
// two-point limit law (mass 1/2 at each of +-H_gamma(T)).
double wasserstein_to_limit(std::vector<double> final_values, GammaExponent gamma,
                            double horizon);

struct EventCheck {
    double union_freq = 0.0;
    double bound = 0.0;
    double sigma3 = 0.0;  // 3 x Wilson-adjusted standard error
    double margin = 0.0;  // bound + sigma3 - union_freq
    bool vacuous = false; // bound >= 1
    bool ok = false;      // margin >= 0 or vacuous
};

EventCheck event_frequency_check(const ExperimentReport& report);

// One run per epsilon (decreasing), dt rescaled by the step-size rule
// dt = min(base dt, eps^2, (delta/(10 eps))^2) snapped to divide T evenly.
// Per-run failures are isolated per row, never aborting the rest of the sweep.
struct SweepRow {
    double epsilon = 0.0;
    std::optional<ExperimentReport> report;
    std::string error;  // nonempty when the run failed
};

std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<double>& epsilons,
                            const RunOptions& options = {});

double sweep_dt(const SimConfig& base, double epsilon);

// dt-halving calibration for the gamma > 0 pathwise inequality: matched
// Brownian paths at dt and dt/2 (coarse increments are sums of fine pairs).
ToleranceCalibration calibrate_pathwise_tol(const SimConfig& config, const TheoremParams& params,
                                            std::int64_t n_calib);

}  // namespace znlab
