#include "ftl/residuals.hpp"

#include "ftl/errors.hpp"
#include "ftl/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace ftl {

namespace {

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

template <class F>
double cell_integral(F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    double error = 0.0, l1 = 0.0;
    const double v = gk15::integrate(f, a, b, 10, 1e-14, &error, &l1);
    if (error > tol && error > 1e-12 * std::max(1.0, l1))
        throw QuadratureFailure("cell integral failed to converge");
    return v;
}

double initial_mass_term(const PiecewiseField& rho, const TestFunction& phi, std::size_t k,
                         double t, double tol) {
    double acc = 0.0;
    const auto& bp = rho.breakpoints[k];
    for (std::size_t i = 0; i < rho.values[k].size(); ++i)
        acc += rho.values[k][i] *
               cell_integral([&](double x) { return phi.phi(t, x); }, bp[i], bp[i + 1], tol);
    return acc;
}

double declared_tolerance(double est_lhs, double est_rem, const QuadControls& qc,
                          std::size_t cells, const TestFunction& phi) {
    const double scale = std::max(1.0, phi.sup_phi);
    return 3.0 * (est_lhs + est_rem) + 10.0 * static_cast<double>(cells) * qc.cell_tol +
           1e3 * qc.solver_tol * scale;
}

} // namespace

ResidualResult continuity_residual(const MacroFields& fields, const TrajectorySet& traj,
                                   const TestFunction& phi, TerminalVariant variant,
                                   const QuadControls& qc) {
    if (variant == TerminalVariant::ZeroAtT && !phi.terminal_zero)
        throw ConfigError("identity as stated needs phi(T) == 0; use the terminal-term variant");
    const int n = traj.n();
    const std::size_t m = traj.samples();
    const double tol = qc.cell_tol;

    std::vector<double> lhs_series(m, 0.0), rem_series(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = traj.times[k];
        const auto& bp = fields.rho.breakpoints[k];
        double acc = 0.0, rem = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double xl = bp[ui], xr = bp[ui + 1];
            acc += fields.rho.values[k][ui] *
                   cell_integral([&](double x) { return phi.dt(t, x); }, xl, xr, tol);
            acc += fields.e1.values[k][ui] *
                   cell_integral([&](double x) { return phi.dx(t, x); }, xl, xr, tol);

            const double d = xr - xl;
            const double dv =
                traj.velocities[ui + 1][k] - traj.velocities[ui][k];
            const double weighted = cell_integral(
                [&](double x) {
                    const double u = (x - xl) / d;
                    return phi.dxx(t, x) * u * u;
                },
                xl, xr, tol);
            rem += 0.5 * dv * (weighted - phi.dx(t, xr));
        }
        lhs_series[k] = acc;
        rem_series[k] = rem;
    }

    ResidualResult out;
    out.lhs = trapezoid(traj.times, lhs_series) +
              initial_mass_term(fields.rho, phi, 0, traj.times.front(), tol);
    if (variant == TerminalVariant::WithTerminalTerm)
        out.lhs -= initial_mass_term(fields.rho, phi, m - 1, traj.times.back(), tol);
    out.remainder = trapezoid(traj.times, rem_series);
    out.remainder_over_n = out.remainder / n;
    out.gap = std::abs(out.lhs - out.remainder_over_n);
    out.quad_tol = declared_tolerance(trapezoid_error_estimate(traj.times, lhs_series),
                                      trapezoid_error_estimate(traj.times, rem_series) / n, qc,
                                      static_cast<std::size_t>(n) * m, phi);
    return out;
}

ResidualResult momentum_residual(const MacroFields& fields, const MobilityField& mobility,
                                 const TrajectorySet& traj, const TestFunction& phi,
                                 TerminalVariant variant, const QuadControls& qc) {
    if (variant == TerminalVariant::ZeroAtT && !phi.terminal_zero)
        throw ConfigError("identity as stated needs phi(T) == 0; use the terminal-term variant");
    const int n = traj.n();
    const std::size_t m = traj.samples();
    const double tol = qc.cell_tol;
    const double eps = traj.config.cfg.epsilon;
    const double gamma = traj.config.cfg.gamma;
    const auto& drift = traj.config.cfg.drift;

    std::vector<double> lhs_series(m, 0.0), rem_series(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double t = traj.times[k];
        const auto& bp = fields.rho.breakpoints[k];
        double acc = 0.0, rem = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const double xl = bp[ui], xr = bp[ui + 1];
            const double rho = fields.rho.values[k][ui];
            const double e1 = fields.e1.values[k][ui];
            const double e2v = fields.e2.values[k][ui];
            const double e2s = fields.e2.slopes[k][ui];

            acc += eps * e1 *
                   cell_integral([&](double x) { return phi.dt(t, x); }, xl, xr, tol);
            acc += eps * cell_integral(
                             [&](double x) {
                                 return (e2v + e2s * (x - xl)) * phi.dx(t, x);
                             },
                             xl, xr, tol);
            acc += rho * cell_integral(
                             [&](double x) { return drift(t, x) * phi.phi(t, x); }, xl, xr,
                             tol);
            acc -= gamma * mobility.field.values[k][ui] *
                   cell_integral([&](double x) { return phi.phi(t, x); }, xl, xr, tol);

            rem += static_cast<double>(n) * rho *
                   cell_integral(
                       [&](double x) {
                           return (drift(t, x) - drift(t, xl)) * phi.phi(t, x);
                       },
                       xl, xr, tol);
        }
        lhs_series[k] = acc;
        rem_series[k] = rem;
    }

    ResidualResult out;
    out.lhs = trapezoid(traj.times, lhs_series) +
              eps * initial_mass_term(fields.e1, phi, 0, traj.times.front(), tol);
    if (variant == TerminalVariant::WithTerminalTerm)
        out.lhs -= eps * initial_mass_term(fields.e1, phi, m - 1, traj.times.back(), tol);
    out.remainder = trapezoid(traj.times, rem_series);
    out.remainder_over_n = out.remainder / n;
    out.gap = std::abs(out.lhs - out.remainder_over_n);
    out.quad_tol = declared_tolerance(trapezoid_error_estimate(traj.times, lhs_series),
                                      trapezoid_error_estimate(traj.times, rem_series) / n, qc,
                                      static_cast<std::size_t>(n) * m, phi);
    return out;
}

BoundCheck remainder_bound_R(double remainder, const TestFunction& phi,
                             const ValidatedConfig& config) {
    const double span = config.domain_right - config.domain_left;
    const double horizon = config.cfg.horizon;
    const double vbound = config.velocity_bound;
    BoundCheck c;
    c.bound = span * (phi.sup_dx + phi.sup_dxx * (span + 1.5 * horizon * vbound));
    c.value = remainder;
    c.slack = c.bound - std::abs(remainder);
    c.pass = c.slack >= 0.0;
    return c;
}

double remainder_constant_R(const ValidatedConfig& config) {
    const double span = config.domain_right - config.domain_left;
    return span * std::max(1.0, span + 1.5 * config.cfg.horizon * config.velocity_bound);
}

BoundCheck remainder_bound_S(double remainder, const TestFunction& phi,
                             const ValidatedConfig& config) {
    const double span = config.domain_right - config.domain_left;
    BoundCheck c;
    c.bound = config.cfg.drift.lipschitz_x() * config.cfg.horizon * span * phi.sup_phi;
    c.value = remainder;
    c.slack = c.bound - std::abs(remainder);
    c.pass = c.slack >= -1e-12 * std::max(1.0, c.bound);
    return c;
}

ResidualReportRow residual_report_row(const MacroFields& fields, const MobilityField& mobility,
                                      const TrajectorySet& traj, const TestFunction& phi,
                                      const QuadControls& qc) {
    ResidualReportRow row;
    row.phi_id = phi.id;
    row.n = traj.n();
    row.eps = traj.config.cfg.epsilon;
    row.continuity = continuity_residual(fields, traj, phi, TerminalVariant::ZeroAtT, qc);
    row.momentum = momentum_residual(fields, mobility, traj, phi, TerminalVariant::ZeroAtT, qc);
    row.bound_R = remainder_bound_R(row.continuity.remainder, phi, traj.config);
    row.bound_S = remainder_bound_S(row.momentum.remainder, phi, traj.config);
    return row;
}

double sum_by_parts_defect(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() + 1 != a.size())
        throw ConfigError("summation by parts needs |a| = |b| + 1 >= 2");
    const std::size_t n = b.size();
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs += (a[i + 1] - a[i]) * b[i];
    double rhs = a[n] * b[n - 1] - a[0] * b[0];
    for (std::size_t i = 0; i + 1 < n; ++i) rhs -= (b[i + 1] - b[i]) * a[i + 1];
    return lhs - rhs;
}

DecayFit fit_decay(std::span<const int> ns, std::span<const double> values, double floor) {
    if (ns.size() != values.size()) throw ConfigError("decay fit arrays differ in length");
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < ns.size(); ++k) {
        if (std::abs(values[k]) > floor) {
            xs.push_back(std::log(static_cast<double>(ns[k])));
            ys.push_back(std::log(std::abs(values[k])));
        }
    }
    DecayFit fit;
    if (xs.empty()) {
        fit.at_floor = true;
        return fit;
    }
    if (xs.size() < 2)
        throw InsufficientPoints("decay fit needs at least two points above the floor");
    const LineFit lf = fit_line(xs, ys);
    fit.slope = lf.slope;
    fit.intercept = lf.intercept;
    fit.fit_residual = lf.residual;
    fit.points_used = static_cast<int>(xs.size());
    return fit;
}

} // namespace ftl
