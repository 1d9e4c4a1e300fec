#include "ftl/oracle.hpp"

#include "ftl/errors.hpp"
#include "ftl/interpolation.hpp"
#include "ftl/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

namespace {

MonotoneTrack track_of(const TrajectorySet& traj, int i) {
    return MonotoneTrack(traj.times, traj.positions[static_cast<std::size_t>(i)],
                         traj.velocities[static_cast<std::size_t>(i)]);
}

} // namespace

double velocity_oracle(const TrajectorySet& traj, int i, double s, double t, double quad_tol) {
    if (i < 0 || i >= traj.n()) throw ConfigError("oracle particle index out of range");
    if (t < s) throw ConfigError("oracle needs s <= t");
    const MonotoneTrack self = track_of(traj, i);
    if (t == s) return self.velocity(s);
    const MonotoneTrack front = track_of(traj, i + 1);

    const auto& cfg = traj.config.cfg;
    const int n = traj.n();
    const double denom_scale = cfg.epsilon;
    auto zeta_plus_delta = [&](double tau) {
        const double gap = front.position(tau) - self.position(tau);
        const double rho = density_of_gap(gap, n);
        return cfg.zeta(rho) + cfg.delta;
    };
    auto rate = [&](double tau) { return cfg.gamma / (denom_scale * zeta_plus_delta(tau)); };
    auto forcing = [&](double tau) {
        const double x = self.position(tau);
        const double gap = front.position(tau) - x;
        const double rho = density_of_gap(gap, n);
        return cfg.theta(rho) * cfg.drift(tau, x) / (denom_scale * zeta_plus_delta(tau));
    };

    const auto panels = static_cast<int>(
        std::max<std::size_t>(64, 4 * traj.times.size() * static_cast<std::size_t>(
                                          std::ceil((t - s) / traj.config.cfg.horizon))));
    const CumulativeIntegral exponent(rate, s, t, panels);
    const double total = exponent.total();

    auto integrand = [&](double tau) {
        const double w = exponent.upto(tau) - total; // <= 0
        return forcing(tau) * std::exp(w);
    };
    const double tail = integrate_adaptive(integrand, s, t, quad_tol, 24);
    const double head = total > 700.0 ? 0.0 : self.velocity(s) * std::exp(-total);
    return head + tail;
}

SaturationProbe boundary_velocity_probe(const TrajectorySet& traj, int i, double zeta_fraction,
                                        int refinements) {
    SaturationProbe probe;
    const auto& cfg = traj.config.cfg;
    const double zeta_bar = cfg.zeta.max_value();
    const double cut = zeta_fraction * zeta_bar;

    std::vector<double> zeta_on_grid(traj.samples());
    for (std::size_t k = 0; k < traj.samples(); ++k)
        zeta_on_grid[k] = cfg.zeta(traj.density(i, k));
    probe.min_zeta = *std::min_element(zeta_on_grid.begin(), zeta_on_grid.end());

    const MonotoneTrack self = track_of(traj, i);
    const MonotoneTrack front = track_of(traj, i + 1);
    auto quasi = [&](double t) {
        const double x = self.position(t);
        const double rho = density_of_gap(front.position(t) - x, traj.n());
        return cfg.theta(rho) * cfg.drift(t, x) / cfg.gamma;
    };
    auto add_row = [&](double t) {
        const double v = self.velocity(t);
        const double q = quasi(t);
        probe.rows.push_back({t, v, q, std::abs(v - q)});
    };

    if (traj.config.is_saturated(i)) {
        // Initially saturated: approach t = 0 from the right.
        probe.saturation_found = true;
        probe.t_star = 0.0;
        double span = std::min(0.05 * cfg.horizon, traj.times[traj.samples() / 8 + 1]);
        for (int j = 0; j < refinements; ++j) {
            add_row(span);
            span *= 0.5;
        }
        std::reverse(probe.rows.begin(), probe.rows.end());
        return probe;
    }

    std::size_t hit = traj.samples();
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        if (zeta_on_grid[k] <= cut) {
            hit = k;
            break;
        }
    }
    if (hit == traj.samples()) return probe; // no saturation event

    probe.saturation_found = true;
    probe.t_star = traj.times[hit];
    const double t_lo = std::max(0.0, probe.t_star - 0.25 * cfg.horizon);
    for (int j = 1; j <= refinements; ++j) {
        const double t = probe.t_star - (probe.t_star - t_lo) * std::pow(0.5, j);
        add_row(t);
    }
    return probe;
}

std::vector<double> dirac_kernel_check(const std::function<double(int, double)>& f,
                                       const std::function<double(int, double)>& g, double a,
                                       double b, double t, std::span<const int> ns,
                                       double quad_tol) {
    if (!(t >= a && t <= b)) throw ConfigError("kernel check needs t in [a, b]");
    std::vector<double> out;
    out.reserve(ns.size());
    for (int n : ns) {
        if (t == a) {
            out.push_back(0.0);
            continue;
        }
        auto inv_g = [&](double tau) {
            const double gv = g(n, tau);
            if (!(gv > 0.0)) throw QuadratureFailure("kernel weight must stay positive");
            return 1.0 / gv;
        };
        const CumulativeIntegral exponent(inv_g, a, t, 512);
        const double total = exponent.total();
        auto integrand = [&](double tau) {
            const double w = exponent.upto(tau) - total;
            return f(n, tau) * inv_g(tau) * std::exp(w);
        };
        out.push_back(integrate_adaptive(integrand, a, t, quad_tol, 24));
    }
    return out;
}

} // namespace ftl
