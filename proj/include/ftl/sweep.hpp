#pragma once

#include "ftl/residuals.hpp"
#include "ftl/solver.hpp"

#include <string>
#include <vector>

namespace ftl {

/// Parametric initial density with unit mass on [left, right]; amplitude is
/// fixed by normalization. Closed-form CDF with a monotone quantile, so that
/// particle placements are exact quantiles.
struct DensityProfile {
    enum class Kind { Uniform, Cosine, Bump };
    Kind kind = Kind::Uniform;
    double left = 0.0;
    double right = 1.0;

    double max_value() const;
    double pdf(double x) const;
    double cdf(double x) const;
    double quantile(double p) const;
};

/// Initial positions for N followers plus the leader: the N+1 quantiles of
/// the shared profile, so each cell carries mass exactly 1/N and the discrete
/// initial data converges to the profile.
std::vector<double> inverse_cdf_placement(const DensityProfile& rho0, int n);

enum class EpsRule { Fixed, OneOverN, PowerOverN };
enum class V0Rule { WellPrepared, Constant, Zero };

struct SweepPlan {
    std::vector<int> n_values{50, 100, 200, 400, 800};
    EpsRule eps_rule = EpsRule::Fixed;
    double eps_value = 1.0; // Fixed
    double eps_c = 1.0;     // PowerOverN: eps = c / n^p
    double eps_p = 1.0;

    DensityProfile rho0;
    V0Rule v0_rule = V0Rule::WellPrepared;
    double v0_value = 0.0;

    double gamma = 1.0;
    double horizon = 0.5;
    // Joint-limit regime: alertness == congestion, one shared profile.
    NonlinearityProfile theta = NonlinearityProfile::power_law(1.0, 1.0);
    DriftField drift = DriftField::constant(1.0);
    LeaderTrajectory leader = LeaderTrajectory::constant_speed(1.0, 1.0);

    int grid_m = 401;
    double tol = 1e-9;
};

double eps_for(const SweepPlan& plan, int n);

/// Build and validate the particle config realizing the plan at one N.
ValidatedConfig config_for(const SweepPlan& plan, int n);

/// Space-time pairings of the macroscopic fields against one test function.
struct PhiPairings {
    std::string phi_id;
    double rho = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double lambda = 0.0;   // e1 / theta(rho) against phi
    double rho_drift = 0.0; // rho F against phi
    double g_gap = 0.0;     // |lambda - rho_drift / gamma|
    double eps_block = 0.0; // |eps-weighted moment block| (before the eps factor)
};

struct SweepEntry {
    int n = 0;
    double eps = 0.0;
    std::vector<ResidualReportRow> residuals; // per catalog phi
    std::vector<PhiPairings> pairings;        // per catalog phi
    std::vector<double> x0_series;            // follower 0 on the shared grid
    std::vector<double> xn_series;            // leader on the shared grid
    double mass_error = 0.0;                  // max_t |int rho - 1|
    double min_gap = 0.0;
    double remainder_constant = 0.0;          // C of the R-bound, must not drift with N
};

struct ConvergenceReport {
    bool vanishing = false;
    std::vector<std::string> phi_ids;
    std::vector<SweepEntry> entries; // ordered as plan.n_values
    // Per consecutive N pair: max pairing difference per phi, and uniform
    // trajectory differences of the tracked endpoints.
    std::vector<std::vector<double>> pairing_cauchy; // [pair][phi]
    std::vector<double> x0_cauchy, xn_cauchy;
    std::vector<DecayFit> fit_R, fit_S, fit_g;       // per phi over the N sequence
};

/// Fixed-eps many-particle sweep.
ConvergenceReport run_many_particle(const SweepPlan& plan, int workers = 1);

/// Joint limit with vanishing inertia (eps rule must send eps to 0).
ConvergenceReport run_vanishing_inertia(const SweepPlan& plan, int workers = 1);

struct InertiaGap {
    double sup_gap = 0.0; // max_{i,k} |x_i - x_i^{first order}|
    std::vector<std::pair<std::string, double>> pairing_gaps; // per phi, density pairing
};

/// Distance between a second-order run and the first-order reference on the
/// same data. Throws ConfigMismatch when the runs are not comparable.
InertiaGap inertia_gap(const TrajectorySet& second_order, const TrajectorySet& first_order);

} // namespace ftl
