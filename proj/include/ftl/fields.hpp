#pragma once

#include "ftl/trajectory.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace ftl {

/// Time-indexed family of compactly supported piecewise fields on the moving
/// cell decomposition [x_i(t_k), x_{i+1}(t_k)). Cells are left-closed
/// right-open and carry either a constant value or an affine one (value at
/// the left edge plus slope). Zero outside the support.
struct PiecewiseField {
    bool affine = false;
    std::vector<double> times;                    // sample times
    std::vector<std::vector<double>> breakpoints; // per time: N+1 edges
    std::vector<std::vector<double>> values;      // per time: N left-edge values
    std::vector<std::vector<double>> slopes;      // per time: N slopes (affine only)

    std::size_t cells() const { return values.empty() ? 0 : values.front().size(); }
};

struct MacroFields {
    PiecewiseField rho; // piecewise-constant density
    PiecewiseField e1;  // piecewise-constant first moment
    PiecewiseField e2;  // piecewise-affine second moment
};

/// Build the macroscopic density and moment approximations from a solved
/// trajectory set.
MacroFields build_fields(const TrajectorySet& traj);

/// Point evaluation: nearest stored time sample, then cell lookup by binary
/// search; zero outside the support.
double evaluate(const PiecewiseField& f, double t, double x);

struct FieldNorms {
    double sup = 0.0;
    std::vector<double> l1_per_time;
    double l1_spacetime = 0.0; // trapezoid over the stored times
    std::vector<std::optional<std::pair<double, double>>> support_per_time; // hull of nonzero cells
};

/// Exact norms for the piecewise representation (cell integrals in closed
/// form, trapezoid across time).
FieldNorms norms_and_support(const PiecewiseField& f);

struct MobilityField {
    PiecewiseField field;       // per-cell e1 / theta(rho)
    double l1_spacetime = 0.0;
    int excluded_initial_cells = 0; // t = 0 cells with vanished congestion function
};

/// Damping-against-mobility ratio e1/theta(rho). Throws
/// SaturatedCellAtPositiveTime if the congestion function vanishes on a cell
/// at t > 0; saturated t = 0 cells are excluded and counted.
MobilityField mobility_ratio_field(const TrajectorySet& traj);

struct MacroscopicInitialData {
    PiecewiseField rho0; // single-time fields at t = 0
    PiecewiseField e10;
};

MacroscopicInitialData initial_data(const TrajectorySet& traj);

} // namespace ftl
