#include "znlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "znlab/mollifier.hpp"

namespace znlab {

namespace {

constexpr std::int64_t block_size = 256;  // fixed: merge tree must not depend on workers
constexpr std::uint64_t calibration_salt = 0x5CA1AB1E5EEDull;
constexpr double fp_allowance = 1e-10;  // accumulated-rounding slack for the exact
                                        // discrete inequalities (values are O(1))

int effective_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic block-parallel map: work is split into fixed index blocks,
// each block is processed sequentially by one worker, and the caller merges
// block results in index order. Scheduling never touches the output bits.
template <typename Fn>
void for_each_block(std::int64_t n_items, int threads, Fn&& fn) {
    const std::int64_t n_blocks = (n_items + block_size - 1) / block_size;
    if (threads <= 1 || n_blocks <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            fn(b, b * block_size, std::min(n_items, (b + 1) * block_size));
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= n_blocks) return;
            fn(b, b * block_size, std::min(n_items, (b + 1) * block_size));
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(std::min<std::int64_t>(threads, n_blocks));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct PathOutcome {
    int sign = 0;
    bool tube_ok = true;
    bool env_ok = true;
    bool ev_moll_ok = true;
    bool ev_w_ok = true;
    bool sign_const = true;
    bool sign_const_quarter = true;
    bool aborted = false;
    double sup_tube_dev = 0.0;
    double max_abs_x = 0.0;
    double x_final = 0.0;
    double m_moll_final = 0.0;
    double occ_deficit = 0.0;
    std::int64_t zero_points = 0;
    double pathwise_margin = std::numeric_limits<double>::infinity();
    double tbar_emp = 0.0;
    std::int64_t eq3_viol = 0, eq4_viol = 0;
    double eq3_excess = -std::numeric_limits<double>::infinity();
    double eq4_excess = -std::numeric_limits<double>::infinity();
};

// Everything shared by all paths of one run, precomputed once.
struct RunContext {
    SimConfig config;
    TheoremParams params;
    TimeGrid grid;
    std::int64_t k_start = 0;    // first grid index with t >= t_bar (n_points if none)
    std::int64_t k_quarter = 0;  // first grid index with t >= T/4
    std::vector<double> extremal_grid;
    std::vector<double> env_lo_grid;
    std::vector<double> env_hi_grid;
    std::vector<std::int64_t> plot_index;  // ascending grid indices of plot slots
    bool flip_sign = false;

    RunContext(const SimConfig& c, const TheoremParams& p, int plot_points)
        : config(c), params(p), grid(make_time_grid(c.horizon, c.dt)) {
        const auto n = grid.n_points();
        const GammaExponent g{c.gamma};
        extremal_grid.resize(n);
        env_lo_grid.resize(n);
        env_hi_grid.resize(n);
        k_start = n;
        k_quarter = n;
        for (std::int64_t k = 0; k < n; ++k) {
            const double t = grid.time_at(k);
            extremal_grid[k] = extremal_value(g, t);
            env_lo_grid[k] = envelope_value(g, p.r_lower, t);
            env_hi_grid[k] = envelope_value(g, p.r_upper, t);
            if (k_start == n && t >= p.t_bar) k_start = k;
            if (k_quarter == n && t >= 0.25 * c.horizon) k_quarter = k;
        }
        if (plot_points > 1) {
            plot_index.reserve(static_cast<std::size_t>(plot_points));
            for (int j = 0; j < plot_points; ++j) {
                const double t = c.horizon * static_cast<double>(j) / (plot_points - 1);
                auto k = static_cast<std::int64_t>(std::llround(t / c.dt));
                plot_index.push_back(std::min(k, n - 1));
            }
            plot_index.back() = n - 1;
        }
    }
};

// Fused simulate-and-classify for one path. plot_row, when non-null, receives
// |X| at the plot slot indices (plot_row[slot * n_paths + path] layout is the
// caller's business; here it is a raw pointer with stride).
PathOutcome run_single_path(const RunContext& ctx, std::uint64_t path, double* plot_sink,
                            std::int64_t plot_stride) {
    const SimConfig& c = ctx.config;
    const GammaExponent gamma{c.gamma};
    const bool gamma_zero = gamma.is_zero();
    const double eps = c.epsilon;
    const double delta = ctx.params.delta;
    const double eta = ctx.params.eta;
    const double slope = gamma_zero ? 0.0 : ctx.params.lemma_slope();
    const double h = ctx.params.h;
    const auto n_points = ctx.grid.n_points();

    PathOutcome out;
    bool pos_ok = true, neg_ok = true;
    bool q_pos = true, q_neg = true;
    bool tbar_emp_set = false;
    double x = 0.0, w = 0.0, m_sgn = 0.0, m_moll = 0.0, occ = 0.0;
    double sup_e_moll = 0.0, sup_e_w = 0.0;
    std::size_t plot_next = 0;

    for (std::int64_t k = 0; k < n_points; ++k) {
        const double t = ctx.grid.time_at(k);
        const double ax = std::fabs(x);
        if (ax > out.max_abs_x) out.max_abs_x = ax;

        const double e_moll = eps * std::fabs(m_moll);
        if (e_moll > sup_e_moll) sup_e_moll = e_moll;
        const double e_w = eps * std::fabs(w);
        if (e_w > sup_e_w) sup_e_w = e_w;

        if (gamma_zero) {
            const double allowance = fp_allowance * (1.0 + t + e_w);
            const double eq4 = ax - (t + e_w);
            if (eq4 > out.eq4_excess) out.eq4_excess = eq4;
            if (eq4 > allowance) ++out.eq4_viol;
            const double eq3 = (occ - eps * std::fabs(m_sgn)) - ax;
            if (eq3 > out.eq3_excess) out.eq3_excess = eq3;
            if (eq3 > allowance) ++out.eq3_viol;
        } else {
            const double margin = smoothed_abs(x, delta) - slope * t + eps * std::fabs(m_moll);
            if (margin < out.pathwise_margin) out.pathwise_margin = margin;
            if (!tbar_emp_set && ax >= 2.0 * delta) {
                out.tbar_emp = t;
                tbar_emp_set = true;
            }
        }
        if (k >= 1 && x == 0.0) ++out.zero_points;

        if (k >= ctx.k_start) {
            const double dev = std::fabs(ax - ctx.extremal_grid[k]);
            if (dev > out.sup_tube_dev) out.sup_tube_dev = dev;
            if (dev > h) out.tube_ok = false;
            if (ax < ctx.env_lo_grid[k] || ax > ctx.env_hi_grid[k]) out.env_ok = false;
            pos_ok = pos_ok && x > 0.0;
            neg_ok = neg_ok && x < 0.0;
        }
        if (k >= ctx.k_quarter) {
            q_pos = q_pos && x > 0.0;
            q_neg = q_neg && x < 0.0;
        }
        if (plot_sink && plot_next < ctx.plot_index.size()) {
            while (plot_next < ctx.plot_index.size() && ctx.plot_index[plot_next] == k) {
                plot_sink[static_cast<std::int64_t>(plot_next) * plot_stride] = ax;
                ++plot_next;
            }
        }

        if (k == n_points - 1) break;
        const double step = ctx.grid.step_length(k);
        double z = path_normal(c, path, static_cast<std::uint64_t>(k));
        if (ctx.flip_sign) z = -z;
        const double dw = std::sqrt(step) * z;
        const double sgn_x = sign_of(x);
        m_sgn += sgn_x * dw;
        m_moll += (delta > 0.0 ? smoothed_abs_d1(x, delta) : sgn_x) * dw;
        occ += (x != 0.0 ? step : 0.0);
        w += dw;
        x += drift_value(gamma, x) * step + eps * dw;
        if (!std::isfinite(x)) {
            out.aborted = true;
            return out;
        }
    }

    out.x_final = x;
    out.m_moll_final = m_moll;
    out.occ_deficit = ctx.grid.time_at(n_points - 1) - occ;
    if (ctx.k_start >= n_points) {
        out.sign_const = true;
        out.sign = static_cast<int>(sign_of(x));
    } else {
        out.sign_const = pos_ok || neg_ok;
        out.sign = pos_ok ? 1 : (neg_ok ? -1 : 0);
    }
    out.sign_const_quarter = q_pos || q_neg;
    out.ev_moll_ok = sup_e_moll <= eta;
    out.ev_w_ok = sup_e_w <= eta;
    if (!tbar_emp_set && !gamma_zero) out.tbar_emp = c.horizon;
    return out;
}

struct BlockSummary {
    std::int64_t count_plus = 0, count_minus = 0, count_undecided = 0;
    std::int64_t tube_viol = 0, env_viol = 0, moll_viol = 0, w_viol = 0, union_viol = 0;
    std::int64_t sign_const_quarter = 0;
    std::int64_t dichotomy_viol = 0, aborted = 0;
    std::int64_t eq3_viol = 0, eq4_viol = 0, zero_points = 0;
    double eq3_excess = -std::numeric_limits<double>::infinity();
    double eq4_excess = -std::numeric_limits<double>::infinity();
    double sum_sup_tube = 0.0;
    double sum_occ_deficit = 0.0, max_occ_deficit = 0.0;
    double min_pathwise_margin = std::numeric_limits<double>::infinity();
    std::int64_t pathwise_ok = 0;
    double sum_m_moll = 0.0, sum_m_moll_sq = 0.0;
    double max_abs_x = 0.0;

    void absorb(const PathOutcome& o, double tol) {
        if (o.aborted) {
            ++aborted;
            ++count_undecided;  // keeps count_plus+count_minus+count_undecided = n
            return;
        }
        if (o.sign > 0)
            ++count_plus;
        else if (o.sign < 0)
            ++count_minus;
        else
            ++count_undecided;
        if (!o.tube_ok) ++tube_viol;
        if (!o.env_ok) ++env_viol;
        if (!o.ev_moll_ok) ++moll_viol;
        if (!o.ev_w_ok) ++w_viol;
        if (!o.ev_moll_ok || !o.ev_w_ok) ++union_viol;
        if (o.sign_const_quarter) ++sign_const_quarter;
        if (o.tube_ok && !o.sign_const) ++dichotomy_viol;
        eq3_viol += o.eq3_viol;
        eq4_viol += o.eq4_viol;
        if (o.eq3_excess > eq3_excess) eq3_excess = o.eq3_excess;
        if (o.eq4_excess > eq4_excess) eq4_excess = o.eq4_excess;
        zero_points += o.zero_points;
        sum_sup_tube += o.sup_tube_dev;
        sum_occ_deficit += o.occ_deficit;
        if (o.occ_deficit > max_occ_deficit) max_occ_deficit = o.occ_deficit;
        if (o.pathwise_margin < min_pathwise_margin) min_pathwise_margin = o.pathwise_margin;
        if (o.pathwise_margin >= -tol) ++pathwise_ok;
        sum_m_moll += o.m_moll_final;
        sum_m_moll_sq += o.m_moll_final * o.m_moll_final;
        if (o.max_abs_x > max_abs_x) max_abs_x = o.max_abs_x;
    }

    void merge(const BlockSummary& b) {
        count_plus += b.count_plus;
        count_minus += b.count_minus;
        count_undecided += b.count_undecided;
        tube_viol += b.tube_viol;
        env_viol += b.env_viol;
        moll_viol += b.moll_viol;
        w_viol += b.w_viol;
        union_viol += b.union_viol;
        sign_const_quarter += b.sign_const_quarter;
        dichotomy_viol += b.dichotomy_viol;
        aborted += b.aborted;
        eq3_viol += b.eq3_viol;
        eq4_viol += b.eq4_viol;
        zero_points += b.zero_points;
        eq3_excess = std::max(eq3_excess, b.eq3_excess);
        eq4_excess = std::max(eq4_excess, b.eq4_excess);
        sum_sup_tube += b.sum_sup_tube;
        sum_occ_deficit += b.sum_occ_deficit;
        max_occ_deficit = std::max(max_occ_deficit, b.max_occ_deficit);
        min_pathwise_margin = std::min(min_pathwise_margin, b.min_pathwise_margin);
        pathwise_ok += b.pathwise_ok;
        sum_m_moll += b.sum_m_moll;
        sum_m_moll_sq += b.sum_m_moll_sq;
        max_abs_x = std::max(max_abs_x, b.max_abs_x);
    }
};

double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

Frequency wilson_frequency(std::int64_t k, std::int64_t n, double z) {
    Frequency f;
    if (n <= 0) return f;
    const double p = static_cast<double>(k) / static_cast<double>(n);
    f.freq = p;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / static_cast<double>(n);
    const double center = (p + z2 / (2.0 * static_cast<double>(n))) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / static_cast<double>(n)
                      + z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n)))
        / denom;
    f.wilson_lo = k == 0 ? 0.0 : std::max(0.0, center - half);
    f.wilson_hi = k == n ? 1.0 : std::min(1.0, center + half);
    return f;
}

PathVerdict classify_path(const PathSample& path, const TheoremParams& params) {
    if (path.times.empty() || path.x.size() != path.times.size())
        throw std::invalid_argument("classify_path: malformed path");
    if (std::fabs(path.times.back() - params.horizon) > 1e-9 * std::max(1.0, params.horizon))
        throw std::invalid_argument("classify_path: path grid does not reach the params horizon");

    const GammaExponent gamma = params.gamma_exp();
    PathVerdict v;
    v.tube_ok = true;
    v.envelope_ok = true;
    v.event_moll_ok = true;
    v.event_w_ok = true;

    double sup_e_moll = 0.0, sup_e_w = 0.0;
    bool pos_ok = true, neg_ok = true;
    bool any_after_tbar = false;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        const double t = path.times[k];
        sup_e_moll = std::max(sup_e_moll, params.epsilon * std::fabs(path.m_moll[k]));
        sup_e_w = std::max(sup_e_w, params.epsilon * std::fabs(path.w[k]));
        if (t < params.t_bar) continue;
        any_after_tbar = true;
        const double ax = std::fabs(path.x[k]);
        const double dev = std::fabs(ax - extremal_value(gamma, t));
        v.sup_tube_deviation = std::max(v.sup_tube_deviation, dev);
        if (dev > params.h) v.tube_ok = false;
        if (ax < envelope_value(gamma, params.r_lower, t)
            || ax > envelope_value(gamma, params.r_upper, t))
            v.envelope_ok = false;
        pos_ok = pos_ok && path.x[k] > 0.0;
        neg_ok = neg_ok && path.x[k] < 0.0;
    }
    v.event_moll_ok = sup_e_moll <= params.eta;
    v.event_w_ok = sup_e_w <= params.eta;
    if (!any_after_tbar) {
        v.sign_constant_after_tbar = true;
        v.sign = static_cast<int>(sign_of(path.x.back()));
    } else {
        v.sign_constant_after_tbar = pos_ok || neg_ok;
        v.sign = pos_ok ? 1 : (neg_ok ? -1 : 0);
    }
    return v;
}

double wasserstein_to_limit(std::vector<double> final_values, GammaExponent gamma,
                            double horizon) {
    if (final_values.empty())
        throw std::invalid_argument("wasserstein_to_limit: empty sample");
    std::sort(final_values.begin(), final_values.end());
    const double target = extremal_value(gamma, horizon);
    const auto n = static_cast<double>(final_values.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < final_values.size(); ++k) {
        const double q_lo = static_cast<double>(k) / n;
        const double q_hi = static_cast<double>(k + 1) / n;
        const double x = final_values[k];
        // limit-law quantile: -target below q = 1/2, +target above
        const double below = std::clamp(0.5 - q_lo, 0.0, q_hi - q_lo);
        acc += below * std::fabs(x + target) + (q_hi - q_lo - below) * std::fabs(x - target);
    }
    return acc;
}

EventCheck event_frequency_check(const ExperimentReport& report) {
    EventCheck check;
    check.union_freq = report.event_union_violation.freq;
    check.bound = report.alpha_bound;
    check.vacuous = report.alpha_bound >= 1.0;
    const auto n = report.n_paths;
    const double z = 3.0;
    const double p_tilde = (check.union_freq * static_cast<double>(n) + z * z / 2.0)
                           / (static_cast<double>(n) + z * z);
    check.sigma3 = z * std::sqrt(p_tilde * (1.0 - p_tilde) / (static_cast<double>(n) + z * z));
    check.margin = check.bound + check.sigma3 - check.union_freq;
    check.ok = check.vacuous || check.margin >= 0.0;
    return check;
}

ToleranceCalibration calibrate_pathwise_tol(const SimConfig& config, const TheoremParams& params,
                                            std::int64_t n_calib) {
    if (params.is_gamma_zero())
        throw std::invalid_argument("calibrate_pathwise_tol: requires gamma > 0");
    const TimeGrid grid = make_time_grid(config.horizon, config.dt);
    const GammaExponent gamma{config.gamma};
    const double eps = config.epsilon;
    const double delta = params.delta;
    const double slope = params.lemma_slope();
    const std::uint64_t seed = config.master_seed ^ calibration_salt;

    double worst_coarse = 0.0, worst_fine = 0.0;
    for (std::int64_t p = 0; p < n_calib; ++p) {
        double xc = 0.0, mc = 0.0;      // coarse path state and its m_moll
        double xf = 0.0, mf = 0.0;      // matched dt/2 refinement
        double min_c = smoothed_abs(0.0, delta), min_f = min_c;
        double t = 0.0;
        for (std::int64_t k = 0; k < grid.n_steps(); ++k) {
            const double step = grid.step_length(k);
            const double half = 0.5 * step;
            const double sq_half = std::sqrt(half);
            const double dw1 = sq_half * standard_normal(seed, static_cast<std::uint64_t>(p),
                                                         static_cast<std::uint64_t>(2 * k));
            const double dw2 = sq_half * standard_normal(seed, static_cast<std::uint64_t>(p),
                                                         static_cast<std::uint64_t>(2 * k + 1));
            // fine: two half steps, margin checked at both fine grid points
            mf += smoothed_abs_d1(xf, delta) * dw1;
            xf += drift_value(gamma, xf) * half + eps * dw1;
            min_f = std::min(min_f, smoothed_abs(xf, delta) - slope * (t + half)
                                        + eps * std::fabs(mf));
            mf += smoothed_abs_d1(xf, delta) * dw2;
            xf += drift_value(gamma, xf) * half + eps * dw2;
            // coarse: one step with the summed increment
            const double dw = dw1 + dw2;
            mc += smoothed_abs_d1(xc, delta) * dw;
            xc += drift_value(gamma, xc) * step + eps * dw;
            t += step;

            const double margin_c = smoothed_abs(xc, delta) - slope * t + eps * std::fabs(mc);
            if (margin_c < min_c) min_c = margin_c;
            const double margin_f =
                smoothed_abs(xf, delta) - slope * t + eps * std::fabs(mf);
            if (margin_f < min_f) min_f = margin_f;
        }
        worst_coarse = std::max(worst_coarse, -std::min(0.0, min_c));
        worst_fine = std::max(worst_fine, -std::min(0.0, min_f));
    }

    ToleranceCalibration calib;
    calib.n_calib = n_calib;
    calib.worst_violation_dt = worst_coarse;
    calib.worst_violation_half = worst_fine;
    calib.order_estimate = (worst_coarse > 0.0 && worst_fine > 0.0)
                               ? std::log2(worst_coarse / worst_fine)
                               : 0.0;
    calib.floor = eps * std::sqrt(config.dt);
    calib.tol = 3.0 * std::max({worst_coarse, worst_fine, calib.floor});
    return calib;
}

double sweep_dt(const SimConfig& base, double epsilon) {
    double dt = std::min(base.dt, epsilon * epsilon);
    if (base.gamma > 0.0) {
        const double delta = std::pow(2.0, (base.gamma - 2.0) / (1.0 + base.gamma))
                             * std::pow(epsilon, 2.0 / (1.0 + base.gamma));
        dt = std::min(dt, (delta / (10.0 * epsilon)) * (delta / (10.0 * epsilon)));
    }
    const double n = std::ceil(base.horizon / dt - 1e-9);
    return base.horizon / n;
}

RunOutput run_experiment(const SimConfig& config, const RunOptions& options) {
    const auto t_begin = std::chrono::steady_clock::now();

    const ConfigCheck check = validate_config(config);
    if (!check.ok()) {
        std::string joined = "invalid config:";
        for (const auto& e : check.errors) joined += " " + e + ";";
        throw std::invalid_argument(joined);
    }
    const TheoremParams params =
        theorem_params(config.gamma, config.epsilon, config.a_exponent, config.horizon);

    RunContext ctx(config, params, options.plot_points);
    ctx.flip_sign = options.flip_sign;

    ExperimentReport rep;
    rep.config = config;
    rep.params = params;
    rep.n_paths = config.n_paths;
    rep.warnings = check.warnings;
    rep.alpha_bound = doob_event_bound(config.epsilon, config.a_exponent, config.horizon);
    rep.alpha_vacuous = rep.alpha_bound >= 1.0;
    rep.fp_allowance_scale = fp_allowance;
    if (!params.is_gamma_zero())
        rep.calibration = calibrate_pathwise_tol(config, params, 100);
    const double tol = rep.calibration.tol;

    const std::int64_t n = config.n_paths;
    const std::int64_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<BlockSummary> partial(static_cast<std::size_t>(n_blocks));
    std::vector<double> x_final(static_cast<std::size_t>(n),
                                std::numeric_limits<double>::quiet_NaN());
    std::vector<double> tbar_emp;
    if (!params.is_gamma_zero())
        tbar_emp.resize(static_cast<std::size_t>(n), std::numeric_limits<double>::quiet_NaN());

    std::vector<double> plot_values;  // [slot][path] row-major
    const auto n_slots = static_cast<std::int64_t>(ctx.plot_index.size());
    if (n_slots > 0) plot_values.resize(static_cast<std::size_t>(n_slots * n));

    for_each_block(n, effective_threads(options.threads),
                   [&](std::int64_t b, std::int64_t begin, std::int64_t end) {
                       BlockSummary summary;
                       for (std::int64_t p = begin; p < end; ++p) {
                           double* sink = n_slots > 0 ? &plot_values[static_cast<std::size_t>(p)]
                                                      : nullptr;
                           const PathOutcome o =
                               run_single_path(ctx, static_cast<std::uint64_t>(p), sink, n);
                           summary.absorb(o, tol);
                           if (!o.aborted) {
                               x_final[static_cast<std::size_t>(p)] = o.x_final;
                               if (!tbar_emp.empty())
                                   tbar_emp[static_cast<std::size_t>(p)] = o.tbar_emp;
                           }
                       }
                       partial[static_cast<std::size_t>(b)] = summary;
                   });

    BlockSummary total;
    for (const auto& s : partial) total.merge(s);

    if (static_cast<double>(total.aborted) > 0.001 * static_cast<double>(n))
        throw std::runtime_error("run_experiment: more than 0.1% of paths aborted non-finite; "
                                 "dt is too large for these parameters");

    const std::int64_t classified = n - total.aborted;
    rep.count_plus = total.count_plus;
    rep.count_minus = total.count_minus;
    rep.count_undecided = total.count_undecided;
    rep.aborted_paths = total.aborted;
    rep.tube_violation = wilson_frequency(total.tube_viol, classified);
    rep.envelope_violation = wilson_frequency(total.env_viol, classified);
    rep.event_moll_violation = wilson_frequency(total.moll_viol, classified);
    rep.event_w_violation = wilson_frequency(total.w_viol, classified);
    rep.event_union_violation = wilson_frequency(total.union_viol, classified);
    rep.dichotomy_violations = total.dichotomy_viol;
    rep.eq3_violations = total.eq3_viol;
    rep.eq4_violations = total.eq4_viol;
    rep.eq3_worst_excess = total.eq3_excess;
    rep.eq4_worst_excess = total.eq4_excess;
    rep.mean_sup_tube_deviation =
        classified > 0 ? total.sum_sup_tube / static_cast<double>(classified) : 0.0;
    rep.occupation.deficit_mean =
        classified > 0 ? total.sum_occ_deficit / static_cast<double>(classified) : 0.0;
    rep.occupation.deficit_max = total.max_occ_deficit;
    const auto interior_points = static_cast<double>(classified)
                                 * static_cast<double>(ctx.grid.n_points() - 1);
    rep.occupation.zero_point_fraction =
        interior_points > 0.0 ? static_cast<double>(total.zero_points) / interior_points : 0.0;
    if (!params.is_gamma_zero()) {
        rep.pathwise_margin_min = total.min_pathwise_margin;
        rep.pathwise_ok_fraction =
            classified > 0 ? static_cast<double>(total.pathwise_ok)
                                 / static_cast<double>(classified)
                           : 0.0;
    }
    if (classified > 0) {
        rep.m_moll_final_mean = total.sum_m_moll / static_cast<double>(classified);
        const double var = std::max(0.0, total.sum_m_moll_sq / static_cast<double>(classified)
                                             - rep.m_moll_final_mean * rep.m_moll_final_mean);
        rep.m_moll_final_sd = std::sqrt(var);
    }
    rep.max_abs_state = total.max_abs_x;
    rep.tightness_constant =
        config.gamma == 0.0 ? 1.0 : std::pow(total.max_abs_x, config.gamma);

    std::vector<double> law_sample;
    law_sample.reserve(static_cast<std::size_t>(classified));
    for (const double v : x_final)
        if (std::isfinite(v)) law_sample.push_back(v);
    if (!law_sample.empty())
        rep.wasserstein_to_limit =
            wasserstein_to_limit(std::move(law_sample), GammaExponent{config.gamma},
                                 config.horizon);

    if (!tbar_emp.empty()) {
        std::vector<double> te;
        te.reserve(tbar_emp.size());
        for (const double v : tbar_emp)
            if (std::isfinite(v)) te.push_back(v);
        if (!te.empty()) {
            double sum = 0.0;
            for (const double v : te) sum += v;
            rep.tbar_emp_mean = sum / static_cast<double>(te.size());
            std::sort(te.begin(), te.end());
            rep.tbar_emp_q05 = quantile_sorted(te, 0.05);
            rep.tbar_emp_q50 = quantile_sorted(te, 0.50);
            rep.tbar_emp_q95 = quantile_sorted(te, 0.95);
        }
    }

    RunOutput out;
    if (n_slots > 0) {
        PlotTable plot;
        plot.t.resize(static_cast<std::size_t>(n_slots));
        plot.extremal.resize(static_cast<std::size_t>(n_slots));
        plot.envelope_lower.resize(static_cast<std::size_t>(n_slots));
        plot.envelope_upper.resize(static_cast<std::size_t>(n_slots));
        plot.q05.resize(static_cast<std::size_t>(n_slots));
        plot.q50.resize(static_cast<std::size_t>(n_slots));
        plot.q95.resize(static_cast<std::size_t>(n_slots));
        std::vector<double> row;
        for (std::int64_t j = 0; j < n_slots; ++j) {
            const auto k = ctx.plot_index[static_cast<std::size_t>(j)];
            plot.t[static_cast<std::size_t>(j)] = ctx.grid.time_at(k);
            plot.extremal[static_cast<std::size_t>(j)] =
                ctx.extremal_grid[static_cast<std::size_t>(k)];
            plot.envelope_lower[static_cast<std::size_t>(j)] =
                ctx.env_lo_grid[static_cast<std::size_t>(k)];
            plot.envelope_upper[static_cast<std::size_t>(j)] =
                ctx.env_hi_grid[static_cast<std::size_t>(k)];
            row.clear();
            for (std::int64_t p = 0; p < n; ++p) {
                const double v = plot_values[static_cast<std::size_t>(j * n + p)];
                if (std::isfinite(v)) row.push_back(v);
            }
            std::sort(row.begin(), row.end());
            plot.q05[static_cast<std::size_t>(j)] = quantile_sorted(row, 0.05);
            plot.q50[static_cast<std::size_t>(j)] = quantile_sorted(row, 0.50);
            plot.q95[static_cast<std::size_t>(j)] = quantile_sorted(row, 0.95);
        }
        out.plot = std::move(plot);
    }

    const auto t_end = std::chrono::steady_clock::now();
    rep.wall_seconds = std::chrono::duration<double>(t_end - t_begin).count();
    const double total_steps =
        static_cast<double>(n) * static_cast<double>(ctx.grid.n_steps());
    rep.steps_per_second = rep.wall_seconds > 0.0 ? total_steps / rep.wall_seconds : 0.0;

    out.report = std::move(rep);
    return out;
}

std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<double>& epsilons,
                            const RunOptions& options) {
    if (epsilons.empty()) throw std::invalid_argument("sweep: empty epsilon list");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("sweep: epsilons must be strictly decreasing");
    std::vector<SweepRow> rows;
    rows.reserve(epsilons.size());
    for (const double eps : epsilons) {
        SweepRow row;
        row.epsilon = eps;
        try {
            SimConfig c = base;
            c.epsilon = eps;
            c.dt = sweep_dt(base, eps);
            row.report = run_experiment(c, options).report;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace znlab
