#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "znlab/bounds.hpp"
#include "znlab/experiments.hpp"
#include "znlab/report_io.hpp"
#include "znlab/selfcheck.hpp"

namespace {

struct CommonFlags {
    znlab::SimConfig config;
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::string plot_out;
    int dump_paths = 0;
    int threads = 0;
    CLI::App* sub = nullptr;

    // flags override config-file values; every effective value lands in the report
    void load_config_file() {
        if (config_path.empty()) return;
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
        std::ostringstream text;
        text << in.rdbuf();
        std::vector<std::string> overridden;
        for (const char* key : {"gamma", "epsilon", "a", "T", "dt", "paths", "seed", "antithetic"})
            if (sub->count(std::string("--") + key) > 0) overridden.emplace_back(key);
        znlab::apply_flat_config(config, znlab::parse_flat_config(text.str()), overridden);
    }
};

void add_common(CLI::App* sub, CommonFlags& f) {
    f.sub = sub;
    sub->add_option("--gamma", f.config.gamma, "drift exponent in [0,1)");
    sub->add_option("--epsilon", f.config.epsilon, "noise amplitude");
    sub->add_option("--a", f.config.a_exponent, "deviation exponent (eta = eps^a)");
    sub->add_option("--T", f.config.horizon, "time horizon");
    sub->add_option("--dt", f.config.dt, "Euler step");
    sub->add_option("--paths", f.config.n_paths, "number of Monte Carlo paths");
    sub->add_option("--seed", f.config.master_seed, "master seed");
    sub->add_flag("--antithetic", f.config.antithetic, "mirror odd paths (exact sign symmetry)");
    sub->add_option("--out", f.out_path, "write the report here instead of stdout");
    sub->add_option("--format", f.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--plot-out", f.plot_out, "write plot-ready CSV (t, extremal, envelopes, quantiles)");
    sub->add_option("--dump-paths", f.dump_paths, "dump the first N paths as per-path CSV files");
    sub->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    sub->add_option("--config", f.config_path, "flat key=value config file; flags override");
}

void emit(const std::string& out_path, const std::string& data) {
    if (out_path.empty())
        std::cout << data;
    else
        znlab::write_file(out_path, data);
}

void print_warnings(const znlab::ExperimentReport& report) {
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    std::fprintf(stderr, "timing: %.2f s wall, %.3g steps/s\n", report.wall_seconds,
                 report.steps_per_second);
}

void dump_first_paths(const CommonFlags& flags, const znlab::TheoremParams& params) {
    const std::string stem = flags.out_path.empty() ? "path" : flags.out_path + ".path";
    for (int p = 0; p < flags.dump_paths; ++p) {
        const auto sample = znlab::simulate_path(flags.config, params.delta,
                                                 static_cast<std::uint64_t>(p));
        znlab::write_file(stem + std::to_string(p) + ".csv", znlab::path_csv(sample));
    }
}

int run_params(const CommonFlags& flags) {
    const auto params = znlab::theorem_params(flags.config.gamma, flags.config.epsilon,
                                              flags.config.a_exponent, flags.config.horizon);
    auto doc = znlab::params_to_json(params);
    if (params.gamma > 0.0) {
        const auto scan = znlab::scan_vacuity(params.gamma, params.horizon, 1e-7);
        doc["vacuity_scan"] = {{"eps_min", scan.eps_min},
                               {"best_a", scan.best_a},
                               {"t_bar_over_T", scan.t_bar_over_T},
                               {"alpha", scan.alpha},
                               {"h_over_HT", scan.h_over_HT},
                               {"fully_vacuous", scan.fully_vacuous}};
    }
    std::cout << znlab::params_text(params);
    emit(flags.out_path, doc.dump(2) + "\n");
    if (flags.out_path.empty()) std::cout << "\n";
    return 0;
}

int run_simulate(const CommonFlags& flags) {
    znlab::RunOptions options;
    options.threads = flags.threads;
    options.plot_points = flags.plot_out.empty() ? 0 : 201;
    const auto output = znlab::run_experiment(flags.config, options);
    if (flags.format == "csv")
        emit(flags.out_path,
             znlab::report_csv_header() + "\n" + znlab::report_csv_row(output.report) + "\n");
    else
        emit(flags.out_path, znlab::report_json_string(output.report));
    if (output.plot) znlab::write_file(flags.plot_out, znlab::plot_csv(*output.plot));
    if (flags.dump_paths > 0) dump_first_paths(flags, output.report.params);
    print_warnings(output.report);
    return 0;
}

int run_sweep(const CommonFlags& flags, const std::vector<double>& epsilons) {
    znlab::RunOptions options;
    options.threads = flags.threads;
    const auto rows = znlab::sweep(flags.config, epsilons, options);
    std::string table = znlab::report_csv_header() + "\n";
    int failed_rows = 0;
    for (const auto& row : rows) {
        if (row.report) {
            table += znlab::report_csv_row(*row.report) + "\n";
            std::fprintf(stderr, "sweep eps=%g: done (%.2f s)\n", row.epsilon,
                         row.report->wall_seconds);
        } else {
            ++failed_rows;
            std::fprintf(stderr, "sweep eps=%g: failed: %s\n", row.epsilon, row.error.c_str());
        }
    }
    emit(flags.out_path, table);
    return failed_rows == 0 ? 0 : 1;
}

bool report_check(const char* name, bool pass, const std::string& details) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << details << "\n";
    return pass;
}

int run_verify(const CommonFlags& flags) {
    bool all_ok = true;
    const auto check = [&](const char* name, bool pass, const std::string& details) {
        all_ok = report_check(name, pass, details) && all_ok;
    };

    // oracle suites (exact, sub-second)
    for (const auto& r : znlab::selftest_checks()) check(r.name.c_str(), r.pass, r.details);

    // quantitative gamma = 0 suite at the requested configuration
    znlab::SimConfig g0 = flags.config;
    g0.gamma = 0.0;
    znlab::RunOptions options;
    options.threads = flags.threads;
    const auto g0_report = znlab::run_experiment(g0, options).report;
    {
        const double alpha = g0_report.alpha_bound;
        const double freq = g0_report.tube_violation.freq;
        const double n = static_cast<double>(g0_report.n_paths);
        const double p_tilde = (freq * n + 4.5) / (n + 9.0);
        const double sigma3 = 3.0 * std::sqrt(p_tilde * (1.0 - p_tilde) / (n + 9.0));
        check("gamma0 tube violation <= alpha", freq <= alpha + sigma3,
              "freq " + znlab::format_double(freq) + " vs alpha "
                  + znlab::format_double(alpha));
        const double p_hat = static_cast<double>(g0_report.count_plus)
                             / static_cast<double>(g0_report.n_paths);
        const double band = 1.5 / std::sqrt(static_cast<double>(g0_report.n_paths));
        check("gamma0 limit law count_plus ~ 1/2", std::fabs(p_hat - 0.5) <= band,
              "count_plus/n = " + znlab::format_double(p_hat));
        check("gamma0 exact discrete inequalities",
              g0_report.eq3_violations == 0 && g0_report.eq4_violations == 0,
              "eq3 worst excess " + znlab::format_double(g0_report.eq3_worst_excess)
                  + ", eq4 worst excess " + znlab::format_double(g0_report.eq4_worst_excess));
        const auto ev = znlab::event_frequency_check(g0_report);
        check("gamma0 Doob bound dominance", ev.ok,
              "union freq " + znlab::format_double(ev.union_freq) + " vs bound "
                  + znlab::format_double(ev.bound) + (ev.vacuous ? " (vacuous)" : ""));
        const double mm = std::fabs(g0_report.m_moll_final_mean);
        const double mm_band = 3.0 * g0_report.m_moll_final_sd
                               / std::sqrt(static_cast<double>(g0_report.n_paths));
        check("gamma0 martingale mean ~ 0", mm <= mm_band,
              "mean " + znlab::format_double(g0_report.m_moll_final_mean));
    }
    if (!flags.out_path.empty())
        znlab::write_file(flags.out_path, znlab::report_json_string(g0_report));
    print_warnings(g0_report);

    // gamma > 0 property suite (pinned configuration; the acceptance suite
    // runs the heavier dt = 1e-5 variant)
    znlab::SimConfig gp;
    gp.gamma = 0.5;
    gp.epsilon = 0.1;
    gp.a_exponent = 0.75;
    gp.horizon = 1.0;
    gp.dt = 1e-4;
    gp.n_paths = std::min<std::int64_t>(flags.config.n_paths, 1000);
    gp.master_seed = flags.config.master_seed;
    const auto gp_report = znlab::run_experiment(gp, options).report;
    check("gamma05 pathwise lower bound holds on >= 99% of paths",
          gp_report.pathwise_ok_fraction >= 0.99,
          "fraction " + znlab::format_double(gp_report.pathwise_ok_fraction) + ", tol "
              + znlab::format_double(gp_report.calibration.tol));
    const auto evp = znlab::event_frequency_check(gp_report);
    check("gamma05 Doob bound dominance", evp.ok,
          "union freq " + znlab::format_double(evp.union_freq) + " vs bound "
              + znlab::format_double(evp.bound) + (evp.vacuous ? " (vacuous)" : ""));
    print_warnings(gp_report);

    return all_ok ? 0 : 1;
}

int run_selftest() {
    bool all_ok = true;
    for (const auto& r : znlab::selftest_checks())
        all_ok = report_check(r.name.c_str(), r.pass, r.details) && all_ok;
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation lab for the zero-noise selection of dX = sgn(X)|X|^g dt + eps dW"};
    app.require_subcommand(1);

    CommonFlags params_flags, sim_flags, verify_flags, sweep_flags;
    std::string epsilons_arg = "0.2,0.1,0.05,0.02";

    auto* sub_params = app.add_subcommand("params", "print the explicit theorem constants");
    add_common(sub_params, params_flags);
    auto* sub_sim = app.add_subcommand("simulate", "run one Monte Carlo experiment");
    add_common(sub_sim, sim_flags);
    auto* sub_verify =
        app.add_subcommand("verify", "run the quantitative gamma=0 suite plus gamma>0 properties");
    add_common(sub_verify, verify_flags);
    auto* sub_sweep = app.add_subcommand("sweep", "one run per epsilon, CSV table output");
    add_common(sub_sweep, sweep_flags);
    sub_sweep->add_option("--epsilons", epsilons_arg, "comma-separated decreasing list");
    auto* sub_selftest =
        app.add_subcommand("selftest", "oracle-only checks (mollifier, comparison, local time)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;  // --help
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (sub_params->parsed()) {
            params_flags.load_config_file();
            return run_params(params_flags);
        }
        if (sub_sim->parsed()) {
            sim_flags.load_config_file();
            return run_simulate(sim_flags);
        }
        if (sub_verify->parsed()) {
            verify_flags.load_config_file();
            return run_verify(verify_flags);
        }
        if (sub_selftest->parsed()) return run_selftest();
        if (sub_sweep->parsed()) {
            sweep_flags.load_config_file();
            std::vector<double> epsilons;
            std::stringstream ss(epsilons_arg);
            std::string item;
            while (std::getline(ss, item, ',')) epsilons.push_back(std::stod(item));
            return run_sweep(sweep_flags, epsilons);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;  // bad flag or config values
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
