#include "ftl/sweep.hpp"

#include "ftl/errors.hpp"
#include "ftl/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace ftl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double DensityProfile::max_value() const {
    const double w = right - left;
    switch (kind) {
    case Kind::Uniform: return 1.0 / w;
    case Kind::Cosine: return 2.0 / w;
    case Kind::Bump: return 1.5 / w;
    }
    return 1.0 / w;
}

double DensityProfile::pdf(double x) const {
    const double w = right - left;
    if (x < left || x > right) return 0.0;
    const double u = (x - left) / w;
    switch (kind) {
    case Kind::Uniform: return 1.0 / w;
    case Kind::Cosine: return (1.0 - std::cos(2.0 * kPi * u)) / w;
    case Kind::Bump: return 6.0 * u * (1.0 - u) / w;
    }
    return 1.0 / w;
}

double DensityProfile::cdf(double x) const {
    if (x <= left) return 0.0;
    if (x >= right) return 1.0;
    const double u = (x - left) / (right - left);
    switch (kind) {
    case Kind::Uniform: return u;
    case Kind::Cosine: return u - std::sin(2.0 * kPi * u) / (2.0 * kPi);
    case Kind::Bump: return u * u * (3.0 - 2.0 * u);
    }
    return u;
}

double DensityProfile::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile argument outside [0, 1]");
    if (p == 0.0) return left;
    if (p == 1.0) return right;
    if (kind == Kind::Uniform) return left + p * (right - left);
    // Monotone scalar inversion by bisection: deterministic and immune to the
    // vanishing derivative at the support edges.
    double lo = 0.0, hi = 1.0;
    auto g = [&](double u) {
        return (kind == Kind::Cosine) ? u - std::sin(2.0 * kPi * u) / (2.0 * kPi)
                                      : u * u * (3.0 - 2.0 * u);
    };
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < p ? lo : hi) = mid;
    }
    return left + 0.5 * (lo + hi) * (right - left);
}

std::vector<double> inverse_cdf_placement(const DensityProfile& rho0, int n) {
    if (n < 1) throw ConfigError("placement needs at least one follower");
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        x[static_cast<std::size_t>(i)] = rho0.quantile(static_cast<double>(i) / n);
    return x;
}

double eps_for(const SweepPlan& plan, int n) {
    switch (plan.eps_rule) {
    case EpsRule::Fixed: return plan.eps_value;
    case EpsRule::OneOverN: return 1.0 / n;
    case EpsRule::PowerOverN: return plan.eps_c / std::pow(static_cast<double>(n), plan.eps_p);
    }
    return plan.eps_value;
}

ValidatedConfig config_for(const SweepPlan& plan, int n) {
    if (!(plan.rho0.right > plan.rho0.left)) throw ConfigError("empty density support");
    if (plan.rho0.max_value() > plan.theta.threshold())
        throw ConfigError("initial density profile exceeds the congestion threshold");
    if (std::abs(plan.leader.start() - plan.rho0.right) >
        1e-9 * std::max(1.0, std::abs(plan.rho0.right)))
        throw ConfigError("leader must start at the right edge of the density support");

    ParticleSystemConfig cfg;
    cfg.n_particles = n;
    cfg.epsilon = eps_for(plan, n);
    cfg.gamma = plan.gamma;
    cfg.horizon = plan.horizon;
    cfg.delta = 0.0; // resolved by validation
    cfg.theta = plan.theta;
    cfg.zeta = plan.theta; // joint-limit regime: alertness == congestion
    cfg.drift = plan.drift;
    cfg.leader = plan.leader;
    cfg.initial_positions = inverse_cdf_placement(plan.rho0, n);
    cfg.initial_velocities.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        double v = 0.0;
        switch (plan.v0_rule) {
        case V0Rule::WellPrepared: {
            const double gap = cfg.initial_positions[ui + 1] - cfg.initial_positions[ui];
            const double rho = density_of_gap(gap, n);
            v = plan.theta(rho) * plan.drift(0.0, cfg.initial_positions[ui]) / plan.gamma;
            break;
        }
        case V0Rule::Constant: v = plan.v0_value; break;
        case V0Rule::Zero: v = 0.0; break;
        }
        cfg.initial_velocities[ui] = v;
    }
    return validate_config(cfg);
}

namespace {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class F>
double cell_integral(F&& f, double a, double b) {
    if (a == b) return 0.0;
    double error = 0.0, l1 = 0.0;
    const double v = gk15::integrate(f, a, b, 10, 1e-14, &error, &l1);
    if (error > 1e-11 * std::max(1.0, l1))
        throw QuadratureFailure("pairing cell integral failed to converge");
    return v;
}

/// Space-time pairing <field, w(t,x)> with exact-in-cell field representation
/// and trapezoid in time.
template <class W>
double pairing(const PiecewiseField& f, const W& w) {
    std::vector<double> series(f.times.size(), 0.0);
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        const double t = f.times[k];
        const auto& bp = f.breakpoints[k];
        double acc = 0.0;
        for (std::size_t i = 0; i < f.values[k].size(); ++i) {
            const double xl = bp[i], xr = bp[i + 1];
            if (f.affine) {
                const double v = f.values[k][i], s = f.slopes[k][i];
                acc += cell_integral(
                    [&](double x) { return (v + s * (x - xl)) * w(t, x); }, xl, xr);
            } else {
                acc += f.values[k][i] *
                       cell_integral([&](double x) { return w(t, x); }, xl, xr);
            }
        }
        series[k] = acc;
    }
    return trapezoid(f.times, series);
}

double single_time_pairing(const PiecewiseField& f, std::size_t k,
                           const std::function<double(double)>& w) {
    const auto& bp = f.breakpoints[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < f.values[k].size(); ++i)
        acc += f.values[k][i] * cell_integral(w, bp[i], bp[i + 1]);
    return acc;
}

SweepEntry compute_entry(const SweepPlan& plan, int n,
                         const std::vector<TestFunction>& catalog,
                         const std::vector<double>& grid) {
    SweepEntry entry;
    entry.n = n;
    const ValidatedConfig config = config_for(plan, n);
    entry.eps = config.cfg.epsilon;

    SolverOptions opts;
    opts.tol = plan.tol;
    const TrajectorySet traj = solve_system(config, grid, opts);
    const MacroFields fields = build_fields(traj);
    const MobilityField mobility = mobility_ratio_field(traj);

    entry.x0_series = traj.positions.front();
    entry.xn_series = traj.positions.back();
    entry.remainder_constant = remainder_constant_R(config);

    double min_gap = std::numeric_limits<double>::infinity();
    double mass_err = 0.0;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        double mass = 0.0;
        for (int i = 0; i < n; ++i) {
            min_gap = std::min(min_gap, traj.gap(i, k));
            mass += fields.rho.values[k][static_cast<std::size_t>(i)] * traj.gap(i, k);
        }
        mass_err = std::max(mass_err, std::abs(mass - 1.0));
    }
    entry.min_gap = min_gap;
    entry.mass_error = mass_err;

    QuadControls qc;
    qc.solver_tol = plan.tol;
    const double gamma = plan.gamma;
    const auto& drift = config.cfg.drift;
    for (const auto& phi : catalog) {
        entry.residuals.push_back(residual_report_row(fields, mobility, traj, phi, qc));

        PhiPairings p;
        p.phi_id = phi.id;
        p.rho = pairing(fields.rho, phi.phi);
        p.e1 = pairing(fields.e1, phi.phi);
        p.e2 = pairing(fields.e2, phi.phi);
        p.lambda = pairing(mobility.field, phi.phi);
        p.rho_drift = pairing(fields.rho, [&](double t, double x) {
            return drift(t, x) * phi.phi(t, x);
        });
        p.g_gap = std::abs(p.lambda - p.rho_drift / gamma);
        const double block =
            pairing(fields.e1, phi.dt) + pairing(fields.e2, phi.dx) +
            single_time_pairing(fields.e1, 0,
                                [&](double x) { return phi.phi(0.0, x); }) -
            single_time_pairing(fields.e1, traj.samples() - 1,
                                [&](double x) { return phi.phi(plan.horizon, x); });
        p.eps_block = std::abs(block);
        entry.pairings.push_back(std::move(p));
    }
    return entry;
}

void parallel_for(int workers, int count, const std::function<void(int)>& fn) {
    workers = std::clamp(workers, 1, count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

ConvergenceReport run_sweep(const SweepPlan& plan, bool vanishing, int workers) {
    if (plan.n_values.size() < 2) throw ConfigError("sweep needs at least two N values");
    for (std::size_t k = 0; k + 1 < plan.n_values.size(); ++k)
        if (plan.n_values[k + 1] <= plan.n_values[k])
            throw ConfigError("sweep N values must increase");

    ConvergenceReport report;
    report.vanishing = vanishing;
    const double a = plan.rho0.left;
    const double b = plan.leader.position(plan.horizon);
    const auto catalog = phi_catalog(plan.horizon, a, b);
    for (const auto& phi : catalog) report.phi_ids.push_back(phi.id);
    const auto grid = uniform_grid(plan.horizon, plan.grid_m);

    const int count = static_cast<int>(plan.n_values.size());
    report.entries.resize(static_cast<std::size_t>(count));
    parallel_for(workers, count, [&](int i) {
        report.entries[static_cast<std::size_t>(i)] =
            compute_entry(plan, plan.n_values[static_cast<std::size_t>(i)], catalog, grid);
    });

    for (std::size_t j = 0; j + 1 < report.entries.size(); ++j) {
        const auto& lo = report.entries[j];
        const auto& hi = report.entries[j + 1];
        std::vector<double> per_phi;
        for (std::size_t p = 0; p < catalog.size(); ++p) {
            const auto& pl = lo.pairings[p];
            const auto& ph = hi.pairings[p];
            per_phi.push_back(std::max({std::abs(ph.rho - pl.rho), std::abs(ph.e1 - pl.e1),
                                        std::abs(ph.e2 - pl.e2),
                                        std::abs(ph.lambda - pl.lambda)}));
        }
        report.pairing_cauchy.push_back(std::move(per_phi));
        double dx0 = 0.0, dxn = 0.0;
        for (std::size_t k = 0; k < lo.x0_series.size(); ++k) {
            dx0 = std::max(dx0, std::abs(hi.x0_series[k] - lo.x0_series[k]));
            dxn = std::max(dxn, std::abs(hi.xn_series[k] - lo.xn_series[k]));
        }
        report.x0_cauchy.push_back(dx0);
        report.xn_cauchy.push_back(dxn);
    }

    for (std::size_t p = 0; p < catalog.size(); ++p) {
        std::vector<double> rv, sv, gv;
        for (const auto& e : report.entries) {
            rv.push_back(std::abs(e.residuals[p].continuity.remainder_over_n));
            sv.push_back(std::abs(e.residuals[p].momentum.remainder_over_n));
            gv.push_back(e.pairings[p].g_gap);
        }
        report.fit_R.push_back(fit_decay(plan.n_values, rv));
        report.fit_S.push_back(fit_decay(plan.n_values, sv));
        report.fit_g.push_back(fit_decay(plan.n_values, gv));
    }
    return report;
}

} // namespace

ConvergenceReport run_many_particle(const SweepPlan& plan, int workers) {
    if (plan.eps_rule != EpsRule::Fixed)
        throw ConfigError("many-particle sweep needs the fixed-eps rule");
    return run_sweep(plan, false, workers);
}

ConvergenceReport run_vanishing_inertia(const SweepPlan& plan, int workers) {
    if (plan.eps_rule == EpsRule::Fixed)
        throw ConfigError("vanishing-inertia sweep needs a vanishing eps rule");
    return run_sweep(plan, true, workers);
}

InertiaGap inertia_gap(const TrajectorySet& second_order, const TrajectorySet& first_order) {
    if (!(second_order.config.cfg.epsilon > 0.0))
        throw ConfigMismatch("second-order run must carry a positive inertia parameter");
    if (second_order.n() != first_order.n() || second_order.times != first_order.times)
        throw ConfigMismatch("runs differ in size or output grid");
    if (!(second_order.config.cfg.initial_positions == first_order.config.cfg.initial_positions))
        throw ConfigMismatch("runs differ in initial positions");

    InertiaGap out;
    for (int i = 0; i <= second_order.n(); ++i) {
        const auto ui = static_cast<std::size_t>(i);
        for (std::size_t k = 0; k < second_order.samples(); ++k)
            out.sup_gap = std::max(out.sup_gap,
                                   std::abs(second_order.positions[ui][k] -
                                            first_order.positions[ui][k]));
    }

    const double a = second_order.config.domain_left;
    const double b = second_order.config.domain_right;
    const auto catalog = phi_catalog(second_order.config.cfg.horizon, a, b);
    const MacroFields f2 = build_fields(second_order);
    const MacroFields f1 = build_fields(first_order);
    for (const auto& phi : catalog) {
        const double p2 = pairing(f2.rho, phi.phi);
        const double p1 = pairing(f1.rho, phi.phi);
        out.pairing_gaps.emplace_back(phi.id, std::abs(p2 - p1));
    }
    return out;
}

} // namespace ftl
