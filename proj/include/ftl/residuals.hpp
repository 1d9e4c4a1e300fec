#pragma once

#include "ftl/fields.hpp"
#include "ftl/test_functions.hpp"
#include "ftl/trajectory.hpp"

#include <span>
#include <string>
#include <vector>

namespace ftl {

/// Which time-boundary convention an identity uses: the original statement
/// requires phi(T) == 0; the variant adds the explicit terminal term instead
/// and accepts arbitrary phi.
enum class TerminalVariant { ZeroAtT, WithTerminalTerm };

struct ResidualResult {
    double lhs = 0.0;              // weak-form left side
    double remainder = 0.0;        // R^N(phi) or S^N(phi)
    double remainder_over_n = 0.0; // remainder / N
    double gap = 0.0;              // |lhs - remainder/N|
    double quad_tol = 0.0;         // declared quadrature + grid tolerance
};

struct QuadControls {
    double cell_tol = 1e-12;   // absolute tolerance per cell integral
    double solver_tol = 1e-9;  // solver tolerance feeding the declared gap budget
};

/// Transport identity: integrates (rho dphi/dt + e1 dphi/dx) plus the initial
/// (and optionally terminal) mass terms against the remainder R^N(phi)
/// computed independently from the trajectories.
ResidualResult continuity_residual(const MacroFields& fields, const TrajectorySet& traj,
                                   const TestFunction& phi,
                                   TerminalVariant variant = TerminalVariant::ZeroAtT,
                                   const QuadControls& qc = {});

/// Momentum identity: eps-weighted moment block plus drift and damping terms
/// against the remainder S^N(phi).
ResidualResult momentum_residual(const MacroFields& fields, const MobilityField& mobility,
                                 const TrajectorySet& traj, const TestFunction& phi,
                                 TerminalVariant variant = TerminalVariant::ZeroAtT,
                                 const QuadControls& qc = {});

struct BoundCheck {
    double bound = 0.0;
    double value = 0.0;
    double slack = 0.0; // bound - |value|; negative means violated
    bool pass = true;
};

struct ResidualReportRow {
    std::string phi_id;
    int n = 0;
    double eps = 0.0;
    ResidualResult continuity;
    ResidualResult momentum;
    BoundCheck bound_R;
    BoundCheck bound_S;
};

/// A-priori remainder bounds, assembled from the run window, horizon and the
/// velocity box; independent of N and eps by construction.
BoundCheck remainder_bound_R(double remainder, const TestFunction& phi,
                             const ValidatedConfig& config);
BoundCheck remainder_bound_S(double remainder, const TestFunction& phi,
                             const ValidatedConfig& config);

/// The N- and eps-free constant C with |R^N(phi)| <= C (|dphi/dx| + |d2phi/dx2|).
double remainder_constant_R(const ValidatedConfig& config);

/// Compute both identities and both bound checks for one test function.
ResidualReportRow residual_report_row(const MacroFields& fields, const MobilityField& mobility,
                                      const TrajectorySet& traj, const TestFunction& phi,
                                      const QuadControls& qc = {});

/// Summation-by-parts identity defect, used as a machine-precision self test:
/// sum (a_{i+1}-a_i) b_i - [a_N b_{N-1} - a_0 b_0 - sum (b_{i+1}-b_i) a_{i+1}].
double sum_by_parts_defect(std::span<const double> a, std::span<const double> b);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;
    int points_used = 0;
    bool at_floor = false; // every value sat below the noise floor
};

/// Log-log decay fit of |values| against n, ignoring entries below the noise
/// floor. Throws InsufficientPoints when fewer than two usable points remain
/// and the data is not all-floor.
DecayFit fit_decay(std::span<const int> ns, std::span<const double> values,
                   double floor = 1e-13);

} // namespace ftl
