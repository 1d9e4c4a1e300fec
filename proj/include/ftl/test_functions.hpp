#pragma once

#include <functional>
#include <string>
#include <vector>

namespace ftl {

/// Smooth space-time test function with analytic derivatives and safe upper
/// bounds for its sup norms over the run window [0,T] x [a,b].
struct TestFunction {
    std::string id;
    bool terminal_zero = true; // phi(T, .) == 0 identically
    std::function<double(double, double)> phi, dt, dx, dxx;
    double sup_phi = 0.0, sup_dt = 0.0, sup_dx = 0.0, sup_dxx = 0.0;
};

/// The fixed, versioned catalog (see kPhiCatalogVersion): a constant-in-x and
/// a linear-in-x entry for telescoping checks, three compactly supported
/// bumps at different scales, three oscillatory entries. All vanish at the
/// final time. Parameterized by the horizon and the spatial window the run
/// occupies.
std::vector<TestFunction> phi_catalog(double horizon, double a, double b);

/// Subset of the catalog by id; empty selection returns the full catalog.
std::vector<TestFunction> phi_catalog_select(double horizon, double a, double b,
                                             const std::vector<std::string>& ids);

} // namespace ftl
