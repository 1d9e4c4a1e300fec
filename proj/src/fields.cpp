#include "ftl/fields.hpp"

#include "ftl/errors.hpp"
#include "ftl/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

namespace {

PiecewiseField skeleton(const TrajectorySet& traj, bool affine) {
    PiecewiseField f;
    f.affine = affine;
    f.times = traj.times;
    const std::size_t m = traj.samples();
    const auto n = static_cast<std::size_t>(traj.n());
    f.breakpoints.assign(m, std::vector<double>(n + 1));
    f.values.assign(m, std::vector<double>(n, 0.0));
    if (affine) f.slopes.assign(m, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i <= n; ++i) f.breakpoints[k][i] = traj.positions[i][k];
    return f;
}

std::size_t nearest_time(const PiecewiseField& f, double t) {
    const auto it = std::lower_bound(f.times.begin(), f.times.end(), t);
    if (it == f.times.begin()) return 0;
    if (it == f.times.end()) return f.times.size() - 1;
    const auto hi = static_cast<std::size_t>(it - f.times.begin());
    return (t - f.times[hi - 1] <= f.times[hi] - t) ? hi - 1 : hi;
}

} // namespace

MacroFields build_fields(const TrajectorySet& traj) {
    MacroFields out;
    out.rho = skeleton(traj, false);
    out.e1 = skeleton(traj, false);
    out.e2 = skeleton(traj, true);
    const int n = traj.n();
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double d = traj.gap(i, k);
            const double rho = density_of_gap(d, n);
            const double vi = traj.velocities[ui][k];
            const double vn = traj.velocities[ui + 1][k];
            out.rho.values[k][ui] = rho;
            out.e1.values[k][ui] = rho * vi;
            out.e2.values[k][ui] = rho * vi * vi;
            out.e2.slopes[k][ui] = rho * vi * (vn - vi) / d;
        }
    }
    return out;
}

double evaluate(const PiecewiseField& f, double t, double x) {
    const std::size_t k = nearest_time(f, t);
    const auto& bp = f.breakpoints[k];
    if (x < bp.front() || x >= bp.back()) return 0.0;
    const auto it = std::upper_bound(bp.begin(), bp.end(), x);
    const auto cell = static_cast<std::size_t>(it - bp.begin()) - 1;
    const double v = f.values[k][cell];
    return f.affine ? v + f.slopes[k][cell] * (x - bp[cell]) : v;
}

FieldNorms norms_and_support(const PiecewiseField& f) {
    FieldNorms out;
    out.l1_per_time.resize(f.times.size(), 0.0);
    out.support_per_time.resize(f.times.size());
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        const auto& bp = f.breakpoints[k];
        double l1 = 0.0;
        std::optional<std::pair<double, double>> hull;
        for (std::size_t i = 0; i < f.values[k].size(); ++i) {
            const double w = bp[i + 1] - bp[i];
            const double left = f.values[k][i];
            const double right = f.affine ? left + f.slopes[k][i] * w : left;
            out.sup = std::max({out.sup, std::abs(left), std::abs(right)});
            l1 += 0.5 * (std::abs(left) + std::abs(right)) * w; // exact for affine cells
            if (left != 0.0 || right != 0.0) {
                if (!hull) hull = {bp[i], bp[i + 1]};
                hull->second = bp[i + 1];
            }
        }
        out.l1_per_time[k] = l1;
        out.support_per_time[k] = hull;
    }
    out.l1_spacetime = trapezoid(f.times, out.l1_per_time);
    return out;
}

MobilityField mobility_ratio_field(const TrajectorySet& traj) {
    MobilityField out;
    out.field = skeleton(traj, false);
    const int n = traj.n();
    const auto& theta = traj.config.cfg.theta;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double rho = traj.density(i, k);
            const double th = theta(rho);
            if (th <= 0.0) {
                if (traj.times[k] > 0.0)
                    throw SaturatedCellAtPositiveTime(
                        "congestion function vanished on cell " + std::to_string(i) +
                        " at t = " + std::to_string(traj.times[k]));
                ++out.excluded_initial_cells;
                out.field.values[k][ui] = 0.0;
                continue;
            }
            out.field.values[k][ui] = rho * traj.velocities[ui][k] / th;
        }
    }
    out.l1_spacetime = norms_and_support(out.field).l1_spacetime;
    return out;
}

MacroscopicInitialData initial_data(const TrajectorySet& traj) {
    const MacroFields all = build_fields(traj);
    MacroscopicInitialData out;
    auto slice = [](const PiecewiseField& f) {
        PiecewiseField s;
        s.affine = f.affine;
        s.times = {f.times.front()};
        s.breakpoints = {f.breakpoints.front()};
        s.values = {f.values.front()};
        if (f.affine) s.slopes = {f.slopes.front()};
        return s;
    };
    out.rho0 = slice(all.rho);
    out.e10 = slice(all.e1);
    return out;
}

} // namespace ftl
