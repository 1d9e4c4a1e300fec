#pragma once

#include "ftl/trajectory.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ftl {

/// Recompute the velocity of particle i at time t from the integrating-factor
/// representation of the damped equation, using adaptive quadrature over the
/// stored trajectory samples of particles i and i+1. Independent of the
/// stepping scheme; used as a consistency oracle. s == t returns the sampled
/// velocity at s.
double velocity_oracle(const TrajectorySet& traj, int i, double s, double t,
                       double quad_tol = 1e-9);

struct SaturationProbe {
    bool saturation_found = false;
    double t_star = 0.0;   // boundary time being approached
    double min_zeta = 0.0; // smallest alertness value seen on the grid
    struct Row {
        double t;
        double velocity;     // measured particle velocity
        double quasi_steady; // theta(rho) F / gamma at the same point
        double gap;          // |velocity - quasi_steady|
    };
    std::vector<Row> rows; // refining sequence approaching t_star
};

/// Diagnostic for the boundary behaviour of the velocity where the alertness
/// degenerates: near an interior saturation time the velocity must approach
/// the quasi-steady value, and an initially saturated particle must leave
/// t = 0 at the quasi-steady velocity. Pure diagnostic; never throws.
SaturationProbe boundary_velocity_probe(const TrajectorySet& traj, int i,
                                        double zeta_fraction = 0.02, int refinements = 12);

/// Values of the concentrating-kernel integral
///   int_a^t f_n(tau)/g_n(tau) exp(-int_tau^t 1/g_n) dtau
/// for each n; as the positive weights g_n vanish the values approach f(t).
std::vector<double> dirac_kernel_check(const std::function<double(int, double)>& f,
                                       const std::function<double(int, double)>& g, double a,
                                       double b, double t, std::span<const int> ns,
                                       double quad_tol = 1e-10);

} // namespace ftl
