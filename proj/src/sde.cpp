#include "znlab/sde.hpp"

#include <limits>
#include <stdexcept>

#include "znlab/mollifier.hpp"

namespace znlab {

PathSample simulate_path(const SimConfig& config, double delta, std::uint64_t path_index,
                         double x0) {
    const TimeGrid grid = make_time_grid(config.horizon, config.dt);
    const auto n = grid.n_points();
    const GammaExponent gamma{config.gamma};
    const double eps = config.epsilon;

    PathSample path;
    path.times.resize(n);
    path.x.resize(n);
    path.w.resize(n);
    path.m_sgn.resize(n);
    path.m_moll.resize(n);
    path.occupation.resize(n);

    double x = x0, w = 0.0, m_sgn = 0.0, m_moll = 0.0, occ = 0.0;
    path.times[0] = 0.0;
    path.x[0] = x;
    path.w[0] = 0.0;
    path.m_sgn[0] = 0.0;
    path.m_moll[0] = 0.0;
    path.occupation[0] = 0.0;

    for (std::int64_t k = 0; k < grid.n_steps(); ++k) {
        const double step = grid.step_length(k);
        const double dw = std::sqrt(step) * path_normal(config, path_index, static_cast<std::uint64_t>(k));
        const double sgn_x = sign_of(x);
        m_sgn += sgn_x * dw;
        m_moll += (delta > 0.0 ? smoothed_abs_d1(x, delta) : sgn_x) * dw;
        occ += (x != 0.0 ? step : 0.0);
        w += dw;
        x += drift_value(gamma, x) * step + eps * dw;

        path.times[k + 1] = grid.time_at(k + 1);
        path.x[k + 1] = x;
        path.w[k + 1] = w;
        path.m_sgn[k + 1] = m_sgn;
        path.m_moll[k + 1] = m_moll;
        path.occupation[k + 1] = occ;

        if (!std::isfinite(x)) {
            path.aborted = true;
            path.abort_step = k + 1;
            path.times.resize(k + 2);
            path.x.resize(k + 2);
            path.w.resize(k + 2);
            path.m_sgn.resize(k + 2);
            path.m_moll.resize(k + 2);
            path.occupation.resize(k + 2);
            break;
        }
    }
    return path;
}

std::vector<double> tanaka_residual(const PathSample& path, const SimConfig& config) {
    if (config.gamma != 0.0)
        throw std::invalid_argument("tanaka_residual: the local-time identity used is gamma = 0");
    std::vector<double> residual(path.x.size());
    for (std::size_t k = 0; k < path.x.size(); ++k)
        residual[k] = std::fabs(path.x[k]) - path.occupation[k] - config.epsilon * path.m_sgn[k];
    return residual;
}

double pathwise_lower_bound_check(const PathSample& path, const TheoremParams& params) {
    if (params.is_gamma_zero())
        throw std::invalid_argument("pathwise_lower_bound_check: requires gamma > 0");
    const double slope = params.lemma_slope();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.x.size(); ++k) {
        const double margin = smoothed_abs(path.x[k], params.delta) - slope * path.times[k]
                              + params.epsilon * std::fabs(path.m_moll[k]);
        if (margin < worst) worst = margin;
    }
    return worst;
}

}  // namespace znlab
