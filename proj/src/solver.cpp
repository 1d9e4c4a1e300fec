#include "ftl/solver.hpp"

#include "ftl/errors.hpp"
#include "ftl/interpolation.hpp"
#include "ftl/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

namespace ftl {

std::vector<double> uniform_grid(double horizon, int m) {
    if (m < 2) throw ConfigError("output grid needs at least two samples");
    if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
    std::vector<double> g(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k)
        g[static_cast<std::size_t>(k)] =
            (k == m - 1) ? horizon : horizon * static_cast<double>(k) / (m - 1);
    return g;
}

namespace {

void check_grid(const std::vector<double>& grid, double horizon) {
    if (grid.size() < 2 || grid.front() != 0.0)
        throw ConfigError("output grid must start at t = 0 and hold >= 2 samples");
    for (std::size_t k = 0; k + 1 < grid.size(); ++k)
        if (!(grid[k + 1] > grid[k])) throw ConfigError("output grid must increase");
    if (grid.back() > horizon * (1.0 + 1e-12))
        throw ConfigError("output grid exceeds the horizon");
}

TrajectorySet make_skeleton(const ValidatedConfig& config, const std::vector<double>& grid) {
    TrajectorySet traj;
    traj.config = config;
    traj.times = grid;
    const auto rows = static_cast<std::size_t>(config.n()) + 1;
    traj.positions.assign(rows, std::vector<double>(grid.size(), 0.0));
    traj.velocities.assign(rows, std::vector<double>(grid.size(), 0.0));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        traj.positions[rows - 1][k] = config.cfg.leader.position(grid[k]);
        traj.velocities[rows - 1][k] = config.cfg.leader.velocity(grid[k]);
    }
    return traj;
}

struct NodeBuffer {
    std::vector<double> t, x, v;
    void push(double tt, double xx, double vv) {
        t.push_back(tt);
        x.push_back(xx);
        v.push_back(vv);
    }
};

} // namespace

TrajectorySet solve_system(const ValidatedConfig& config, const std::vector<double>& output_grid,
                           const SolverOptions& opts) {
    check_grid(output_grid, config.cfg.horizon);
    const int n = config.n();
    const double horizon = config.cfg.horizon;
    const double delta = opts.delta_override > 0.0 ? opts.delta_override : config.cfg.delta;
    const double eps = config.cfg.epsilon;
    const double gamma = config.cfg.gamma;
    const auto& theta = config.cfg.theta;
    const auto& zeta = config.cfg.zeta;
    const auto& drift = config.cfg.drift;

    TrajectorySet traj = make_skeleton(config, output_grid);
    traj.config.cfg.delta = delta; // record the regularization actually used

    StepControls ctl;
    ctl.tol = opts.tol;
    ctl.h_min = horizon * 1e-14;
    ctl.h_max = horizon;
    ctl.v_scale = std::max({config.velocity_bound, config.data_bound, 1e-9});
    ctl.x_scale = std::max(config.domain_right - config.domain_left, 1e-9);
    ctl.gap_floor = config.min_gap();
    ctl.stiff_zeta_cut = 0.05 * zeta.max_value();
    ctl.stiff_floor = horizon * 5e-7;

    std::function<double(double)> ahead = [&leader = config.cfg.leader](double t) {
        return leader.position(t);
    };
    MonotoneTrack track; // owns the interpolant `ahead` points into for i < N-1

    for (int i = n - 1; i >= 0; --i) {
        const auto ui = static_cast<std::size_t>(i);
        const CoeffFn model = [&](double t, double x) {
            LocalCoeffs c;
            c.gap = ahead(t) - x;
            if (!(c.gap > 0.0)) return c;
            const double rho = 1.0 / (n * c.gap);
            c.zeta = zeta(rho);
            c.a = gamma / (eps * (c.zeta + delta));
            c.q = theta(rho) * drift(t, x) / gamma;
            return c;
        };

        StepperState st;
        st.p = {0.0, config.cfg.initial_positions[ui], config.start_velocity[ui]};
        st.h = std::min(output_grid[1] - output_grid[0], horizon / 64.0);

        NodeBuffer nodes;
        nodes.push(st.p.t, st.p.x, st.p.v);
        traj.positions[ui][0] = st.p.x;
        traj.velocities[ui][0] = st.p.v;

        long steps = 0;
        for (std::size_t k = 1; k < output_grid.size(); ++k) {
            const double target = output_grid[k];
            while (st.p.t < target) {
                step_particle(st, model, ctl, target);
                nodes.push(st.p.t, st.p.x, st.p.v);
                if (++steps > opts.max_steps)
                    throw ToleranceNotMet("particle " + std::to_string(i) + " exceeded " +
                                          std::to_string(opts.max_steps) + " steps");
            }
            traj.positions[ui][k] = st.p.x;
            traj.velocities[ui][k] = st.p.v;
        }

        track = MonotoneTrack(std::move(nodes.t), std::move(nodes.x), std::move(nodes.v));
        ahead = [&track](double t) { return track.position(t); };
    }
    return traj;
}

namespace {

// Dormand-Prince 5(4) pair for the first-order cascade.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

} // namespace

TrajectorySet first_order_reference(const ValidatedConfig& config,
                                    const std::vector<double>& output_grid,
                                    const SolverOptions& opts) {
    check_grid(output_grid, config.cfg.horizon);
    const int n = config.n();
    const double horizon = config.cfg.horizon;
    const double gamma = config.cfg.gamma;
    const auto& theta = config.cfg.theta;
    const auto& drift = config.cfg.drift;
    const double floor = config.min_gap();
    const double x_scale = std::max(config.domain_right - config.domain_left, 1e-9);
    const double gap_reject = floor - 10.0 * opts.tol * x_scale;
    const double h_min = horizon * 1e-14;

    TrajectorySet traj = make_skeleton(config, output_grid);

    std::function<double(double)> ahead = [&leader = config.cfg.leader](double t) {
        return leader.position(t);
    };
    MonotoneTrack track;

    for (int i = n - 1; i >= 0; --i) {
        const auto ui = static_cast<std::size_t>(i);
        // Returns no value when the evaluation point sits at or under the
        // ordering floor, which signals the controller to reject the step.
        auto rhs = [&](double t, double x) -> std::optional<double> {
            const double gap = ahead(t) - x;
            if (!(gap > gap_reject) || !(gap > 0.0)) return std::nullopt;
            const double rho = 1.0 / (n * gap);
            return theta(rho) * drift(t, x) / gamma;
        };

        double t = 0.0;
        double x = config.cfg.initial_positions[ui];
        double h = std::min(output_grid[1] - output_grid[0], horizon / 64.0);

        NodeBuffer nodes;
        {
            const auto f0 = rhs(0.0, x);
            if (!f0) throw OrderingViolation("initial gap at the floor, particle " +
                                             std::to_string(i));
            nodes.push(0.0, x, *f0);
            traj.positions[ui][0] = x;
            traj.velocities[ui][0] = *f0;
        }

        long steps = 0;
        for (std::size_t k = 1; k < output_grid.size(); ++k) {
            const double target = output_grid[k];
            while (t < target) {
                double hs = std::min(h, target - t);
                for (;;) {
                    const auto k1 = rhs(t, x);
                    const auto k2 = k1 ? rhs(t + c2 * hs, x + hs * a21 * *k1) : std::nullopt;
                    const auto k3 =
                        k2 ? rhs(t + c3 * hs, x + hs * (a31 * *k1 + a32 * *k2)) : std::nullopt;
                    const auto k4 = k3 ? rhs(t + c4 * hs,
                                             x + hs * (a41 * *k1 + a42 * *k2 + a43 * *k3))
                                       : std::nullopt;
                    const auto k5 =
                        k4 ? rhs(t + c5 * hs,
                                 x + hs * (a51 * *k1 + a52 * *k2 + a53 * *k3 + a54 * *k4))
                           : std::nullopt;
                    const auto k6 =
                        k5 ? rhs(t + hs, x + hs * (a61 * *k1 + a62 * *k2 + a63 * *k3 +
                                                   a64 * *k4 + a65 * *k5))
                           : std::nullopt;
                    std::optional<double> x5;
                    std::optional<double> k7;
                    if (k6) {
                        x5 = x + hs * (b1 * *k1 + b3 * *k3 + b4 * *k4 + b5 * *k5 + b6 * *k6);
                        k7 = rhs(t + hs, *x5);
                    }
                    if (k7) {
                        const double err = hs * std::abs(e1 * *k1 + e3 * *k3 + e4 * *k4 +
                                                         e5 * *k5 + e6 * *k6 + e7 * *k7);
                        const double err_norm = err / (opts.tol * x_scale);
                        if (err_norm <= 1.0) {
                            t = (std::abs(target - (t + hs)) < 1e-12 * horizon) ? target
                                                                                : t + hs;
                            x = std::max(x, *x5); // drift is nonnegative
                            const double grow =
                                err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 4.0;
                            h = hs * std::clamp(grow, 0.2, 4.0);
                            const auto fe = rhs(t, x);
                            nodes.push(t, x, fe ? *fe : 0.0);
                            break;
                        }
                        hs *= std::max(0.1, 0.9 * std::pow(err_norm, -0.2));
                    } else {
                        hs *= 0.5; // an evaluation hit the ordering floor
                    }
                    if (hs < h_min)
                        throw OrderingViolation(
                            "first-order step underflow at t = " + std::to_string(t) +
                            ", particle " + std::to_string(i));
                }
                if (++steps > opts.max_steps)
                    throw ToleranceNotMet("first-order particle " + std::to_string(i) +
                                          " exceeded the step budget");
            }
            traj.positions[ui][k] = x;
            traj.velocities[ui][k] = nodes.v.back();
        }

        track = MonotoneTrack(std::move(nodes.t), std::move(nodes.x), std::move(nodes.v));
        ahead = [&track](double t_) { return track.position(t_); };
    }
    return traj;
}

} // namespace ftl
