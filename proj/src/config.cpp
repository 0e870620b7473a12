#include "znlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "znlab/bounds.hpp"

namespace znlab {

namespace {
std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: not a boolean: " + v);
}
}  // namespace

std::vector<std::pair<std::string, std::string>> parse_flat_config(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": empty key or value");
        entries.emplace_back(key, value);
    }
    return entries;
}

void apply_flat_config(SimConfig& config,
                       const std::vector<std::pair<std::string, std::string>>& entries,
                       const std::vector<std::string>& overridden) {
    const auto pinned = [&](const std::string& key) {
        return std::find(overridden.begin(), overridden.end(), key) != overridden.end();
    };
    for (const auto& [key, value] : entries) {
        if (pinned(key)) continue;
        if (key == "gamma")
            config.gamma = std::stod(value);
        else if (key == "epsilon")
            config.epsilon = std::stod(value);
        else if (key == "a")
            config.a_exponent = std::stod(value);
        else if (key == "T")
            config.horizon = std::stod(value);
        else if (key == "dt")
            config.dt = std::stod(value);
        else if (key == "paths")
            config.n_paths = std::stoll(value);
        else if (key == "seed")
            config.master_seed = std::stoull(value);
        else if (key == "antithetic")
            config.antithetic = parse_bool(value);
        else
            throw std::invalid_argument("config: unknown key: " + key);
    }
}

ConfigCheck validate_config(const SimConfig& c) {
    ConfigCheck check;
    auto err = [&](std::string m) { check.errors.push_back(std::move(m)); };
    auto warn = [&](std::string m) { check.warnings.push_back(std::move(m)); };

    if (!(c.gamma >= 0.0 && c.gamma < 1.0)) err("gamma must lie in [0, 1)");
    if (!(c.epsilon > 0.0)) err("epsilon must be > 0");
    if (!(c.horizon > 0.0)) err("T must be > 0");
    if (!(c.dt > 0.0)) err("dt must be > 0");
    if (c.dt > c.horizon) err("dt must not exceed T");
    if (c.n_paths < 1) err("paths must be >= 1");
    if (c.antithetic && c.n_paths % 2 != 0) err("antithetic mode needs an even path count");

    if (!(c.a_exponent > 0.0 && c.a_exponent < 1.0)) {
        err("a must lie in (0, 1)");
    } else if (c.gamma > 0.0) {
        const double a_min = 2.0 * c.gamma / (1.0 + c.gamma);
        if (c.a_exponent <= a_min)
            err("a must exceed 2*gamma/(1+gamma) = " + std::to_string(a_min));
    }
    if (!check.errors.empty()) return check;

    if (c.dt > c.epsilon * c.epsilon)
        warn("dt > eps^2: the grid does not resolve the diffusive scale at the origin");
    if (c.gamma > 0.0) {
        const double delta = std::pow(2.0, (c.gamma - 2.0) / (1.0 + c.gamma))
                             * std::pow(c.epsilon, 2.0 / (1.0 + c.gamma));
        if (c.epsilon * std::sqrt(c.dt) > delta / 10.0)
            warn("eps*sqrt(dt) > delta/10: per-step noise is large at the mollification scale");
    }
    return check;
}

double TimeGrid::time_at(std::int64_t k) const {
    if (has_partial && k == n_full + 1) return n_full * dt + remainder;
    return static_cast<double>(k) * dt;
}

TimeGrid make_time_grid(double horizon, double dt) {
    if (!(dt > 0.0) || !(horizon >= dt))
        throw std::invalid_argument("make_time_grid: need 0 < dt <= T");
    TimeGrid grid;
    grid.dt = dt;
    const double ratio = horizon / dt;
    const auto nearest = static_cast<std::int64_t>(std::llround(ratio));
    if (nearest >= 1 && std::fabs(ratio - static_cast<double>(nearest)) < 1e-9) {
        grid.n_full = nearest;
        grid.remainder = 0.0;
        grid.has_partial = false;
    } else {
        grid.n_full = static_cast<std::int64_t>(ratio);
        grid.remainder = horizon - static_cast<double>(grid.n_full) * dt;
        grid.has_partial = grid.remainder > 0.0;
    }
    return grid;
}

}  // namespace znlab
