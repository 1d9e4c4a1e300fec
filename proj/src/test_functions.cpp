#include "ftl/test_functions.hpp"

#include "ftl/errors.hpp"

#include <cmath>

namespace ftl {

namespace {

/// C2 compactly supported bump (1 - u^2)^3 on |u| < 1.
double bump(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return s * s * s;
}
double bump_d1(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return -6.0 * u * s * s;
}
double bump_d2(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double s = 1.0 - u * u;
    return 6.0 * s * (5.0 * u * u - 1.0);
}

TestFunction make_bump(const std::string& id, double horizon, double center, double width) {
    TestFunction f;
    f.id = id;
    const double T = horizon, c = center, w = width;
    f.phi = [T, c, w](double t, double x) { return (1.0 - t / T) * bump((x - c) / w); };
    f.dt = [T, c, w](double, double x) { return -bump((x - c) / w) / T; };
    f.dx = [T, c, w](double t, double x) { return (1.0 - t / T) * bump_d1((x - c) / w) / w; };
    f.dxx = [T, c, w](double t, double x) {
        return (1.0 - t / T) * bump_d2((x - c) / w) / (w * w);
    };
    f.sup_phi = 1.0;
    f.sup_dt = 1.0 / T;
    f.sup_dx = 1.7173 / w; // max of 6|u|(1-u^2)^2 is 96/(25 sqrt 5)
    f.sup_dxx = 6.0 / (w * w);
    return f;
}

TestFunction make_osc(const std::string& id, double horizon, double a, double kappa,
                      double omega, double phase) {
    TestFunction f;
    f.id = id;
    const double T = horizon;
    auto time_part = [T, omega](double t) { return (1.0 - t / T) * std::cos(omega * t); };
    auto time_part_dt = [T, omega](double t) {
        return -std::cos(omega * t) / T - (1.0 - t / T) * omega * std::sin(omega * t);
    };
    auto space_part = [a, kappa, phase](double x) { return std::sin(kappa * (x - a) + phase); };
    f.phi = [=](double t, double x) { return time_part(t) * space_part(x); };
    f.dt = [=](double t, double x) { return time_part_dt(t) * space_part(x); };
    f.dx = [=](double t, double x) {
        return time_part(t) * kappa * std::cos(kappa * (x - a) + phase);
    };
    f.dxx = [=](double t, double x) { return -kappa * kappa * time_part(t) * space_part(x); };
    f.sup_phi = 1.0;
    f.sup_dt = 1.0 / T + omega;
    f.sup_dx = kappa;
    f.sup_dxx = kappa * kappa;
    return f;
}

} // namespace

std::vector<TestFunction> phi_catalog(double horizon, double a, double b) {
    if (!(horizon > 0.0) || !(b > a)) throw ConfigError("catalog needs T > 0 and b > a");
    const double T = horizon;
    const double L = b - a;
    const double c = 0.5 * (a + b);
    const double xabs = std::max(std::abs(a), std::abs(b));
    std::vector<TestFunction> cat;

    {
        TestFunction f;
        f.id = "const_in_x";
        f.phi = [T](double t, double) { return 1.0 - t / T; };
        f.dt = [T](double, double) { return -1.0 / T; };
        f.dx = [](double, double) { return 0.0; };
        f.dxx = [](double, double) { return 0.0; };
        f.sup_phi = 1.0;
        f.sup_dt = 1.0 / T;
        cat.push_back(std::move(f));
    }
    {
        TestFunction f;
        f.id = "linear_in_x";
        f.phi = [T](double t, double x) { return (1.0 - t / T) * x; };
        f.dt = [T](double, double x) { return -x / T; };
        f.dx = [T](double t, double) { return 1.0 - t / T; };
        f.dxx = [](double, double) { return 0.0; };
        f.sup_phi = xabs;
        f.sup_dt = xabs / T;
        f.sup_dx = 1.0;
        cat.push_back(std::move(f));
    }
    cat.push_back(make_bump("bump_wide", T, c, 0.45 * L));
    cat.push_back(make_bump("bump_mid", T, c - 0.15 * L, 0.25 * L));
    cat.push_back(make_bump("bump_narrow", T, c + 0.18 * L, 0.12 * L));
    const double two_pi = 2.0 * 3.14159265358979323846;
    cat.push_back(make_osc("osc_low", T, a, two_pi / L, 0.0, 0.0));
    cat.push_back(make_osc("osc_mid", T, a, 2.0 * two_pi / L, 0.5 * two_pi / T, 0.7));
    cat.push_back(make_osc("osc_high", T, a, 4.0 * two_pi / L, two_pi / T, 1.3));
    return cat;
}

std::vector<TestFunction> phi_catalog_select(double horizon, double a, double b,
                                             const std::vector<std::string>& ids) {
    auto cat = phi_catalog(horizon, a, b);
    if (ids.empty()) return cat;
    std::vector<TestFunction> out;
    for (const auto& id : ids) {
        bool found = false;
        for (auto& f : cat) {
            if (f.id == id) {
                out.push_back(f);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("unknown test function id: " + id);
    }
    return out;
}

} // namespace ftl
