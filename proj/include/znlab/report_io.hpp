#pragma once

#include <string>

#include "json.hpp"
#include "znlab/experiments.hpp"

namespace znlab {

// Shortest decimal string that round-trips the IEEE-754 double exactly.
std::string format_double(double v);

nlohmann::ordered_json params_to_json(const TheoremParams& params);
std::string params_text(const TheoremParams& params);  // flat key-value block

// Canonical report document. Timing is deliberately absent: the same seed must
// give byte-identical files at any worker count.
nlohmann::ordered_json report_to_json(const ExperimentReport& report);
std::string report_json_string(const ExperimentReport& report);

std::string report_csv_header();
std::string report_csv_row(const ExperimentReport& report);

std::string plot_csv(const PlotTable& plot);
std::string path_csv(const PathSample& path);  // t,x,w,m_sgn,m_moll,occupation

void write_file(const std::string& path, const std::string& contents);

}  // namespace znlab
