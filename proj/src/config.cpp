#include "ftl/config.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ftl {

double default_delta(int n_particles) {
    const double n = static_cast<double>(std::max(n_particles, 1));
    return std::min(1e-3, 1.0 / (n * n));
}

bool ValidatedConfig::is_saturated(int i) const {
    return std::binary_search(saturated_indexes.begin(), saturated_indexes.end(), i);
}

double ValidatedConfig::velocity_box(int i) const {
    return std::max(vtilde0[static_cast<std::size_t>(i)],
                    theta_max / cfg.gamma * drift_max);
}

std::vector<ValidationIssue> check_config(const ParticleSystemConfig& cfg) {
    std::vector<ValidationIssue> issues;
    auto add = [&](std::string field, int index, std::string msg) {
        issues.push_back({std::move(field), index, std::move(msg)});
    };

    const int n = cfg.n_particles;
    if (n < 1) add("n_particles", -1, "need at least one follower");
    if (!(cfg.epsilon > 0.0)) add("epsilon", -1, "inertia parameter must be positive");
    if (!(cfg.gamma > 0.0)) add("gamma", -1, "damping parameter must be positive");
    if (!(cfg.horizon > 0.0)) add("horizon", -1, "time horizon must be positive");

    const double rho_theta = cfg.theta.threshold();
    const double rho_zeta = cfg.zeta.threshold();
    if (rho_zeta > rho_theta)
        add("zeta", -1, "alertness threshold exceeds congestion threshold");

    if (n >= 1) {
        if (static_cast<int>(cfg.initial_positions.size()) != n + 1) {
            add("initial_positions", -1,
                "expected " + std::to_string(n + 1) + " positions, got " +
                    std::to_string(cfg.initial_positions.size()));
        } else {
            for (int i = 0; i < n; ++i) {
                const double gap = cfg.initial_positions[static_cast<std::size_t>(i) + 1] -
                                   cfg.initial_positions[static_cast<std::size_t>(i)];
                if (!(gap > 0.0)) {
                    add("initial_positions", i, "positions must be strictly increasing");
                    continue;
                }
                const double rho = 1.0 / (n * gap);
                if (rho > rho_theta * (1.0 + 1e-12))
                    add("initial_positions", i,
                        "initial density " + std::to_string(rho) +
                            " exceeds the congestion threshold " + std::to_string(rho_theta));
            }
            if (std::abs(cfg.leader.start() - cfg.initial_positions.back()) >
                1e-12 * std::max(1.0, std::abs(cfg.initial_positions.back())))
                add("leader", -1, "leader trajectory does not start at the last position");
        }
        if (!cfg.initial_velocities.empty() &&
            static_cast<int>(cfg.initial_velocities.size()) != n)
            add("initial_velocities", -1,
                "expected " + std::to_string(n) + " entries, got " +
                    std::to_string(cfg.initial_velocities.size()));
    }

    // Velocities: required and nonnegative on unsaturated indexes. Saturated
    // indexes carry no admissible velocity; any prescribed value there is
    // ignored downstream rather than rejected.
    if (static_cast<int>(cfg.initial_positions.size()) == n + 1 &&
        (cfg.initial_velocities.empty() ||
         static_cast<int>(cfg.initial_velocities.size()) == n)) {
        for (int i = 0; i < n; ++i) {
            const double gap = cfg.initial_positions[static_cast<std::size_t>(i) + 1] -
                               cfg.initial_positions[static_cast<std::size_t>(i)];
            if (!(gap > 0.0)) continue;
            const double rho = 1.0 / (n * gap);
            const bool saturated = rho >= rho_zeta && rho <= rho_theta * (1.0 + 1e-12);
            if (saturated) continue;
            const auto& v = cfg.initial_velocities.empty()
                                ? std::optional<double>{}
                                : cfg.initial_velocities[static_cast<std::size_t>(i)];
            if (!v.has_value())
                add("initial_velocities", i, "unsaturated index needs a velocity");
            else if (!(*v >= 0.0))
                add("initial_velocities", i, "velocity must be nonnegative");
        }
    }

    return issues;
}

ValidatedConfig validate_config(const ParticleSystemConfig& cfg) {
    const auto issues = check_config(cfg);
    if (!issues.empty()) {
        std::ostringstream msg;
        msg << "invalid configuration:";
        for (const auto& it : issues) {
            msg << "\n  - " << it.field;
            if (it.index >= 0) msg << "[" << it.index << "]";
            msg << ": " << it.message;
        }
        throw ConfigError(msg.str());
    }

    ValidatedConfig v;
    v.cfg = cfg;
    if (!(v.cfg.delta > 0.0)) v.cfg.delta = default_delta(cfg.n_particles);
    if (v.cfg.initial_velocities.empty())
        v.cfg.initial_velocities.assign(static_cast<std::size_t>(cfg.n_particles),
                                        std::optional<double>{});

    const int n = cfg.n_particles;
    const double rho_theta = cfg.theta.threshold();
    const double rho_zeta = cfg.zeta.threshold();

    v.initial_density.resize(static_cast<std::size_t>(n));
    v.vtilde0.resize(static_cast<std::size_t>(n));
    v.start_velocity.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double gap = cfg.initial_positions[ui + 1] - cfg.initial_positions[ui];
        const double rho = density_of_gap(gap, n);
        v.initial_density[ui] = rho;
        const bool saturated = rho >= rho_zeta && rho <= rho_theta * (1.0 + 1e-12);
        if (saturated) {
            v.saturated_indexes.push_back(i);
            v.vtilde0[ui] = 0.0;
            v.start_velocity[ui] =
                cfg.saturated_start == SaturatedStart::QuasiSteady
                    ? cfg.theta(std::min(rho, rho_theta)) *
                          cfg.drift(0.0, cfg.initial_positions[ui]) / cfg.gamma
                    : 0.0;
        } else {
            v.vtilde0[ui] = *v.cfg.initial_velocities[ui];
            v.start_velocity[ui] = v.vtilde0[ui];
        }
    }

    v.theta_max = cfg.theta.max_value();
    v.domain_left = cfg.initial_positions.front();
    v.domain_right = cfg.leader.position(cfg.horizon);
    v.drift_max = cfg.drift.max_on(0.0, cfg.horizon, v.domain_left, v.domain_right);
    const double vt_max = v.vtilde0.empty()
                              ? 0.0
                              : *std::max_element(v.vtilde0.begin(), v.vtilde0.end());
    v.velocity_bound = std::max(vt_max, v.theta_max / cfg.gamma * v.drift_max);
    v.data_bound = std::max(vt_max, cfg.leader.max_velocity(cfg.horizon));
    v.leader_strict = cfg.leader.strictly_increasing(cfg.horizon);
    return v;
}

} // namespace ftl
