#pragma once

#include "ftl/config.hpp"

#include <string>
#include <vector>

namespace ftl {

/// Dense output of a solved run: positions and velocities of all N+1
/// particles (the leader is row N) sampled on the output grid. Immutable
/// after construction.
struct TrajectorySet {
    ValidatedConfig config;
    std::vector<double> times;                    // M samples covering [0, T]
    std::vector<std::vector<double>> positions;   // (N+1) x M
    std::vector<std::vector<double>> velocities;  // (N+1) x M

    int n() const { return config.n(); }
    std::size_t samples() const { return times.size(); }

    double gap(int i, std::size_t k) const {
        return positions[static_cast<std::size_t>(i) + 1][k] -
               positions[static_cast<std::size_t>(i)][k];
    }
    double density(int i, std::size_t k) const;
};

struct InvariantCheck {
    std::string name;
    bool applicable = true; // some conclusions need positive drift and a strictly moving leader
    bool pass = true;
    double worst = 0.0; // most extreme margin observed (sign convention per check)
    std::string detail;
};

/// Run the per-sample trajectory invariants: strict ordering with the hard
/// gap floor, nondecreasing positions, the velocity box, and (when the
/// hypotheses hold) no congestion at positive times.
std::vector<InvariantCheck> check_invariants(const TrajectorySet& traj, double slack = 1e-8);

bool all_pass(const std::vector<InvariantCheck>& checks);

} // namespace ftl
