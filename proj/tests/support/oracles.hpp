#pragma once

// Test-only independent oracles. Nothing here may call into the solver paths
// it is used to check.

#include "ftl/config.hpp"
#include "ftl/trajectory.hpp"

#include <cmath>
#include <vector>

namespace ftl::testing {

/// Brute-force reference for the regularized second-order system: all N
/// followers integrated as one coupled ODE system with a fixed-step classical
/// 4-stage Runge-Kutta method. O(h^4), no adaptivity, no cascade, no
/// exponential update: an entirely separate solution path.
inline TrajectorySet brute_force_reference(const ValidatedConfig& config,
                                           const std::vector<double>& grid, double h_step) {
    const int n = config.n();
    const double gamma = config.cfg.gamma;
    const double eps = config.cfg.epsilon;
    const double delta = config.cfg.delta;
    const auto& theta = config.cfg.theta;
    const auto& zeta = config.cfg.zeta;
    const auto& drift = config.cfg.drift;
    const auto& leader = config.cfg.leader;

    // State layout: y = (x_0..x_{N-1}, v_0..v_{N-1}).
    const std::size_t dim = 2 * static_cast<std::size_t>(n);
    std::vector<double> y(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (int i = 0; i < n; ++i) {
        y[static_cast<std::size_t>(i)] = config.cfg.initial_positions[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(n + i)] = config.start_velocity[static_cast<std::size_t>(i)];
    }

    auto rhs = [&](double t, const std::vector<double>& s, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double xi = s[ui];
            const double vi = s[static_cast<std::size_t>(n) + ui];
            const double ahead = (i + 1 < n) ? s[ui + 1] : leader.position(t);
            const double rho = 1.0 / (n * (ahead - xi));
            const double acc = (theta(rho) * drift(t, xi) - gamma * vi) /
                               (eps * (zeta(rho) + delta));
            out[ui] = vi;
            out[static_cast<std::size_t>(n) + ui] = acc;
        }
    };

    TrajectorySet traj;
    traj.config = config;
    traj.times = grid;
    traj.positions.assign(static_cast<std::size_t>(n) + 1,
                          std::vector<double>(grid.size(), 0.0));
    traj.velocities.assign(static_cast<std::size_t>(n) + 1,
                           std::vector<double>(grid.size(), 0.0));

    double t = 0.0;
    std::size_t next_out = 0;
    auto record = [&](std::size_t k) {
        for (int i = 0; i < n; ++i) {
            traj.positions[static_cast<std::size_t>(i)][k] = y[static_cast<std::size_t>(i)];
            traj.velocities[static_cast<std::size_t>(i)][k] =
                y[static_cast<std::size_t>(n + i)];
        }
        traj.positions[static_cast<std::size_t>(n)][k] = leader.position(grid[k]);
        traj.velocities[static_cast<std::size_t>(n)][k] = leader.velocity(grid[k]);
    };
    record(next_out++);

    while (next_out < grid.size()) {
        const double target = grid[next_out];
        while (t < target) {
            const double h = std::min(h_step, target - t);
            rhs(t, y, k1);
            for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            rhs(t + 0.5 * h, tmp, k2);
            for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            rhs(t + 0.5 * h, tmp, k3);
            for (std::size_t j = 0; j < dim; ++j) tmp[j] = y[j] + h * k3[j];
            rhs(t + h, tmp, k4);
            for (std::size_t j = 0; j < dim; ++j)
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t += h;
        }
        t = target;
        record(next_out++);
    }
    return traj;
}

/// Same idea for the first-order dynamics gamma x' = theta(rho) F(t, x).
inline TrajectorySet brute_force_first_order(const ValidatedConfig& config,
                                             const std::vector<double>& grid, double h_step) {
    const int n = config.n();
    const double gamma = config.cfg.gamma;
    const auto& theta = config.cfg.theta;
    const auto& drift = config.cfg.drift;
    const auto& leader = config.cfg.leader;

    std::vector<double> y(static_cast<std::size_t>(n)), k1(y), k2(y), k3(y), k4(y), tmp(y);
    for (int i = 0; i < n; ++i)
        y[static_cast<std::size_t>(i)] = config.cfg.initial_positions[static_cast<std::size_t>(i)];

    auto rhs = [&](double t, const std::vector<double>& s, std::vector<double>& out) {
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double ahead = (i + 1 < n) ? s[ui + 1] : leader.position(t);
            const double rho = 1.0 / (n * (ahead - s[ui]));
            out[ui] = theta(rho) * drift(t, s[ui]) / gamma;
        }
    };

    TrajectorySet traj;
    traj.config = config;
    traj.times = grid;
    traj.positions.assign(static_cast<std::size_t>(n) + 1,
                          std::vector<double>(grid.size(), 0.0));
    traj.velocities.assign(static_cast<std::size_t>(n) + 1,
                           std::vector<double>(grid.size(), 0.0));

    double t = 0.0;
    std::size_t next_out = 0;
    auto record = [&](std::size_t k) {
        std::vector<double> v(static_cast<std::size_t>(n));
        rhs(grid[k], y, v);
        for (int i = 0; i < n; ++i) {
            traj.positions[static_cast<std::size_t>(i)][k] = y[static_cast<std::size_t>(i)];
            traj.velocities[static_cast<std::size_t>(i)][k] = v[static_cast<std::size_t>(i)];
        }
        traj.positions[static_cast<std::size_t>(n)][k] = leader.position(grid[k]);
        traj.velocities[static_cast<std::size_t>(n)][k] = leader.velocity(grid[k]);
    };
    record(next_out++);

    while (next_out < grid.size()) {
        const double target = grid[next_out];
        while (t < target) {
            const double h = std::min(h_step, target - t);
            rhs(t, y, k1);
            for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            rhs(t + 0.5 * h, tmp, k2);
            for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            rhs(t + 0.5 * h, tmp, k3);
            for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + h * k3[j];
            rhs(t + h, tmp, k4);
            for (std::size_t j = 0; j < y.size(); ++j)
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t += h;
        }
        t = target;
        record(next_out++);
    }
    return traj;
}

/// A smooth 8-follower setup used by several oracle comparisons.
inline ParticleSystemConfig smooth_config(int n = 8, double eps = 1.0, double gamma = 1.0,
                                          double horizon = 1.0) {
    ParticleSystemConfig cfg;
    cfg.n_particles = n;
    cfg.epsilon = eps;
    cfg.gamma = gamma;
    cfg.horizon = horizon;
    cfg.theta = NonlinearityProfile::power_law(2.0, 1.0, ProfileRole::Congestion);
    cfg.zeta = NonlinearityProfile::power_law(1.5, 1.0, ProfileRole::Alertness);
    cfg.drift = DriftField::constant(1.0);
    cfg.leader = LeaderTrajectory::constant_speed(2.0, 0.9);
    cfg.initial_positions.resize(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double u = static_cast<double>(i) / n;
        // Mildly nonuniform spacing, densities near 0.5, far from threshold.
        cfg.initial_positions[static_cast<std::size_t>(i)] = 2.0 * (u + 0.08 * u * (1.0 - u));
    }
    cfg.initial_velocities.assign(static_cast<std::size_t>(n), 0.25);
    return cfg;
}

} // namespace ftl::testing
