#include "znlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace znlab {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {
double json_safe(double v) { return std::isfinite(v) ? v : 0.0; }

nlohmann::ordered_json frequency_json(const Frequency& f) {
    return {{"freq", f.freq}, {"wilson_lo", f.wilson_lo}, {"wilson_hi", f.wilson_hi}};
}

nlohmann::ordered_json config_json(const SimConfig& c) {
    return {{"gamma", c.gamma},     {"epsilon", c.epsilon}, {"a", c.a_exponent},
            {"T", c.horizon},       {"dt", c.dt},           {"paths", c.n_paths},
            {"seed", c.master_seed}, {"antithetic", c.antithetic}};
}
}  // namespace

nlohmann::ordered_json params_to_json(const TheoremParams& p) {
    nlohmann::ordered_json j{{"gamma", p.gamma},
                             {"epsilon", p.epsilon},
                             {"a", p.a_exponent},
                             {"T", p.horizon},
                             {"eta", p.eta},
                             {"delta", p.delta},
                             {"c1", p.c1},
                             {"t_bar", p.t_bar},
                             {"alpha", p.alpha},
                             {"alpha_paper_variant", p.alpha_paper_variant},
                             {"h", p.h},
                             {"r_lower", p.r_lower.r},
                             {"r_upper", p.r_upper.r},
                             {"informative_t_bar", p.informative_t_bar},
                             {"informative_alpha", p.informative_alpha},
                             {"informative_h", p.informative_h}};
    j["discrepancies"] = p.discrepancies;
    return j;
}

std::string params_text(const TheoremParams& p) {
    std::ostringstream out;
    const auto kv = [&](const char* key, const std::string& value) {
        out << key << " = " << value << "\n";
    };
    kv("gamma", format_double(p.gamma));
    kv("epsilon", format_double(p.epsilon));
    kv("a", format_double(p.a_exponent));
    kv("T", format_double(p.horizon));
    kv("eta", format_double(p.eta));
    kv("delta", format_double(p.delta));
    kv("c1", format_double(p.c1));
    kv("t_bar", format_double(p.t_bar));
    kv("alpha", format_double(p.alpha));
    kv("alpha_paper_variant", format_double(p.alpha_paper_variant));
    kv("h", format_double(p.h));
    kv("r_lower", format_double(p.r_lower.r));
    kv("r_upper", format_double(p.r_upper.r));
    kv("informative_t_bar", p.informative_t_bar ? "true" : "false");
    kv("informative_alpha", p.informative_alpha ? "true" : "false");
    kv("informative_h", p.informative_h ? "true" : "false");
    for (const auto& d : p.discrepancies) out << "# discrepancy: " << d << "\n";
    return out.str();
}

nlohmann::ordered_json report_to_json(const ExperimentReport& r) {
    nlohmann::ordered_json results{
        {"n_paths", r.n_paths},
        {"count_plus", r.count_plus},
        {"count_minus", r.count_minus},
        {"count_undecided", r.count_undecided},
        {"tube_violation", frequency_json(r.tube_violation)},
        {"envelope_violation", frequency_json(r.envelope_violation)},
        {"event_moll_violation", frequency_json(r.event_moll_violation)},
        {"event_w_violation", frequency_json(r.event_w_violation)},
        {"event_union_violation", frequency_json(r.event_union_violation)},
        {"alpha_bound", r.alpha_bound},
        {"alpha_vacuous", r.alpha_vacuous},
        {"wasserstein_to_limit", r.wasserstein_to_limit},
        {"mean_sup_tube_deviation", r.mean_sup_tube_deviation},
        {"dichotomy_violations", r.dichotomy_violations},
        {"aborted_paths", r.aborted_paths},
        {"occupation",
         {{"deficit_mean", r.occupation.deficit_mean},
          {"deficit_max", r.occupation.deficit_max},
          {"zero_point_fraction", r.occupation.zero_point_fraction}}},
        {"m_moll_final_mean", r.m_moll_final_mean},
        {"m_moll_final_sd", r.m_moll_final_sd},
        {"max_abs_state", r.max_abs_state},
        {"tightness_constant", r.tightness_constant}};
    if (r.config.gamma == 0.0) {
        results["eq3_violations"] = r.eq3_violations;
        results["eq4_violations"] = r.eq4_violations;
        results["eq3_worst_excess"] = json_safe(r.eq3_worst_excess);
        results["eq4_worst_excess"] = json_safe(r.eq4_worst_excess);
        results["fp_allowance_scale"] = r.fp_allowance_scale;
    } else {
        results["pathwise_margin_min"] = json_safe(r.pathwise_margin_min);
        results["pathwise_ok_fraction"] = r.pathwise_ok_fraction;
        results["tbar_emp"] = {{"mean", r.tbar_emp_mean},
                               {"q05", r.tbar_emp_q05},
                               {"q50", r.tbar_emp_q50},
                               {"q95", r.tbar_emp_q95}};
    }

    nlohmann::ordered_json doc{{"schema_version", 1},
                               {"config", config_json(r.config)},
                               {"params", params_to_json(r.params)},
                               {"results", results}};
    if (r.config.gamma == 0.0) {
        doc["tolerance_calibration"] = nullptr;
    } else {
        doc["tolerance_calibration"] = {
            {"n_calib", r.calibration.n_calib},
            {"worst_violation_dt", r.calibration.worst_violation_dt},
            {"worst_violation_half", r.calibration.worst_violation_half},
            {"order_estimate", json_safe(r.calibration.order_estimate)},
            {"floor", r.calibration.floor},
            {"tol", r.calibration.tol}};
    }
    doc["warnings"] = r.warnings;
    return doc;
}

std::string report_json_string(const ExperimentReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string report_csv_header() {
    return "gamma,epsilon,a,T,dt,paths,seed,antithetic,eta,delta,c1,t_bar,alpha,h,"
           "informative_t_bar,informative_alpha,informative_h,count_plus,count_minus,"
           "count_undecided,tube_violation_freq,tube_wilson_lo,tube_wilson_hi,"
           "event_union_freq,event_union_lo,event_union_hi,alpha_bound,"
           "wasserstein_to_limit,mean_sup_tube_deviation,aborted_paths";
}

std::string report_csv_row(const ExperimentReport& r) {
    std::ostringstream out;
    const char sep = ',';
    out << format_double(r.config.gamma) << sep << format_double(r.config.epsilon) << sep
        << format_double(r.config.a_exponent) << sep << format_double(r.config.horizon) << sep
        << format_double(r.config.dt) << sep << r.config.n_paths << sep << r.config.master_seed
        << sep << (r.config.antithetic ? 1 : 0) << sep << format_double(r.params.eta) << sep
        << format_double(r.params.delta) << sep << format_double(r.params.c1) << sep
        << format_double(r.params.t_bar) << sep << format_double(r.params.alpha) << sep
        << format_double(r.params.h) << sep << (r.params.informative_t_bar ? 1 : 0) << sep
        << (r.params.informative_alpha ? 1 : 0) << sep << (r.params.informative_h ? 1 : 0) << sep
        << r.count_plus << sep << r.count_minus << sep << r.count_undecided << sep
        << format_double(r.tube_violation.freq) << sep << format_double(r.tube_violation.wilson_lo)
        << sep << format_double(r.tube_violation.wilson_hi) << sep
        << format_double(r.event_union_violation.freq) << sep
        << format_double(r.event_union_violation.wilson_lo) << sep
        << format_double(r.event_union_violation.wilson_hi) << sep
        << format_double(r.alpha_bound) << sep << format_double(r.wasserstein_to_limit) << sep
        << format_double(r.mean_sup_tube_deviation) << sep << r.aborted_paths;
    return out.str();
}

std::string plot_csv(const PlotTable& plot) {
    std::ostringstream out;
    out << "t,extremal,envelope_lower,envelope_upper,q05,q50,q95\n";
    for (std::size_t j = 0; j < plot.t.size(); ++j) {
        out << format_double(plot.t[j]) << ',' << format_double(plot.extremal[j]) << ','
            << format_double(plot.envelope_lower[j]) << ','
            << format_double(plot.envelope_upper[j]) << ',' << format_double(plot.q05[j]) << ','
            << format_double(plot.q50[j]) << ',' << format_double(plot.q95[j]) << '\n';
    }
    return out.str();
}

std::string path_csv(const PathSample& path) {
    std::ostringstream out;
    out << "t,x,w,m_sgn,m_moll,occupation\n";
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        out << format_double(path.times[k]) << ',' << format_double(path.x[k]) << ','
            << format_double(path.w[k]) << ',' << format_double(path.m_sgn[k]) << ','
            << format_double(path.m_moll[k]) << ',' << format_double(path.occupation[k]) << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace znlab
