#include "ftl/trajectory.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftl {

double TrajectorySet::density(int i, std::size_t k) const {
    return density_of_gap(gap(i, k), n());
}

std::vector<InvariantCheck> check_invariants(const TrajectorySet& traj, double slack) {
    std::vector<InvariantCheck> out;
    const int n = traj.n();
    const std::size_t m = traj.samples();
    const double floor = traj.config.min_gap();

    {
        InvariantCheck c{"ordering_min_gap"};
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) worst = std::min(worst, traj.gap(i, k));
        c.worst = worst;
        c.pass = worst > 0.0 && worst >= floor * (1.0 - 1e-9) - slack;
        c.detail = "min gap " + std::to_string(worst) + ", floor " + std::to_string(floor);
        out.push_back(std::move(c));
    }
    {
        InvariantCheck c{"monotone_positions"};
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto& x = traj.positions[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k + 1 < m; ++k)
                worst = std::min(worst, x[k + 1] - x[k]);
        }
        c.worst = worst;
        c.pass = worst >= -slack;
        c.detail = "most negative increment " + std::to_string(worst);
        out.push_back(std::move(c));
    }
    {
        InvariantCheck c{"velocity_box"};
        double worst = 0.0; // largest excursion outside the box
        for (int i = 0; i < n; ++i) {
            const double box = traj.config.velocity_box(i);
            const auto& v = traj.velocities[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < m; ++k) {
                worst = std::max(worst, -v[k]);
                worst = std::max(worst, v[k] - box);
            }
        }
        c.worst = worst;
        c.pass = worst <= slack;
        c.detail = "worst box excursion " + std::to_string(worst);
        out.push_back(std::move(c));
    }
    {
        InvariantCheck c{"no_congestion_positive_time"};
        const bool hypotheses = traj.config.leader_strict &&
                                traj.config.cfg.drift.min_value() > 0.0;
        c.applicable = hypotheses;
        double worst = 0.0; // max rho - threshold over t > 0
        const double thr = traj.config.cfg.theta.threshold();
        for (int i = 0; i < n && hypotheses; ++i)
            for (std::size_t k = 1; k < m; ++k)
                worst = std::max(worst, traj.density(i, k) - thr);
        c.worst = worst;
        c.pass = !hypotheses || worst < 0.0;
        c.detail = hypotheses ? "max density excess " + std::to_string(worst)
                              : "skipped: needs positive drift and strictly moving leader";
        out.push_back(std::move(c));
    }
    return out;
}

bool all_pass(const std::vector<InvariantCheck>& checks) {
    return std::all_of(checks.begin(), checks.end(),
                       [](const InvariantCheck& c) { return !c.applicable || c.pass; });
}

} // namespace ftl
