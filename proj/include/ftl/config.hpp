#pragma once

#include "ftl/drift.hpp"
#include "ftl/leader.hpp"
#include "ftl/nonlinearity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ftl {

/// How initially saturated particles (alertness already zero) pick up their
/// velocity. The ODE is first order there, so the choice only affects the
/// regularized start-up:
///   - QuasiSteady: theta(rho_i^0) F(0, x_i^0) / gamma, the limit value the
///     dynamics is forced onto anyway (default);
///   - Zero: start at rest and let the regularized equation relax.
enum class SaturatedStart { QuasiSteady, Zero };

struct ParticleSystemConfig {
    int n_particles = 1;   // N followers; the leader is particle N
    double epsilon = 1.0;  // inertia scale, > 0
    double gamma = 1.0;    // damping, > 0
    double horizon = 1.0;  // final time T, > 0
    double delta = 0.0;    // regularization; <= 0 means "auto": min(1e-3, 1/N^2)

    std::vector<double> initial_positions;                 // N+1, strictly increasing
    std::vector<std::optional<double>> initial_velocities; // N entries; nullopt = unset

    NonlinearityProfile theta = NonlinearityProfile::power_law(1.0, 1.0, ProfileRole::Congestion);
    NonlinearityProfile zeta = NonlinearityProfile::power_law(1.0, 1.0, ProfileRole::Alertness);
    DriftField drift = DriftField::constant(1.0);
    LeaderTrajectory leader = LeaderTrajectory::constant_speed(1.0, 1.0);

    SaturatedStart saturated_start = SaturatedStart::QuasiSteady;
};

struct ValidationIssue {
    std::string field;
    int index = -1; // offending index where applicable
    std::string message;
};

/// Immutable, fully checked configuration plus the derived quantities every
/// downstream module needs. Validation is idempotent: validating `cfg` again
/// reproduces the same object.
struct ValidatedConfig {
    ParticleSystemConfig cfg; // canonical form (delta resolved)

    std::vector<double> initial_density;  // rho_i^0, i = 0..N-1
    std::vector<int> saturated_indexes;   // indexes with rho_i^0 in [zeta thr, theta thr]
    std::vector<double> vtilde0;          // prescribed velocities, 0 on saturated indexes
    std::vector<double> start_velocity;   // velocities handed to the regularized solver

    double theta_max = 1.0;    // max of the congestion function
    double drift_max = 1.0;    // max F over [0,T] x [x_0^0, x_N(T)]
    double velocity_bound = 0; // max_i vtilde_i^0 v (theta_max/gamma * drift_max)
    double domain_left = 0.0;  // x_0^0
    double domain_right = 0.0; // x_N(T)
    double data_bound = 0.0;   // max(sup v^0, sup leader velocity)
    bool leader_strict = true; // leader velocity positive on (0, T]

    int n() const { return cfg.n_particles; }
    /// Hard lower bound on gaps: 1/(N * theta threshold).
    double min_gap() const {
        return 1.0 / (static_cast<double>(cfg.n_particles) * cfg.theta.threshold());
    }
    bool is_saturated(int i) const;
    /// Per-particle velocity box: vtilde_i^0 v (theta_max/gamma * drift_max).
    double velocity_box(int i) const;
};

/// Collect all validation problems without throwing.
std::vector<ValidationIssue> check_config(const ParticleSystemConfig& cfg);

/// Validate and derive; throws ConfigError listing every issue.
ValidatedConfig validate_config(const ParticleSystemConfig& cfg);

/// Default regularization: min(1e-3, 1/N^2), small enough that it decays
/// faster than the O(1/N) interpolant error measured by the residual studies.
double default_delta(int n_particles);

} // namespace ftl
