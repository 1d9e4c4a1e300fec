#pragma once

#include "ftl/trajectory.hpp"

#include <vector>

namespace ftl {

struct SolverOptions {
    double tol = 1e-9;          // local error target, relative to problem scales
    double delta_override = -1; // > 0 replaces the config regularization
    long max_steps = 40'000'000; // per particle; exceeded -> ToleranceNotMet
};

/// Uniform output grid with m samples covering [0, horizon].
std::vector<double> uniform_grid(double horizon, int m);

/// Solve the regularized second-order system as a backward cascade: particle
/// i sees the already-solved particle i+1 through a frozen monotone
/// interpolant, starting from the prescribed leader. Throws
/// OrderingViolation / ToleranceNotMet on integrator failure.
TrajectorySet solve_system(const ValidatedConfig& config,
                           const std::vector<double>& output_grid,
                           const SolverOptions& opts = {});

/// Independent first-order reference dynamics (no inertia, no
/// regularization): gamma x' = theta(rho) F(t, x), solved with an embedded
/// Dormand-Prince 5(4) pair over the same cascade structure.
TrajectorySet first_order_reference(const ValidatedConfig& config,
                                    const std::vector<double>& output_grid,
                                    const SolverOptions& opts = {});

} // namespace ftl
