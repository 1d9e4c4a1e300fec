#include "ftl/drift.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftl {

namespace {

void check_profile(const LinearProfile& p, const char* what) {
    if (p.abscissas.size() != p.values.size() || p.abscissas.size() < 2)
        throw ConfigError(std::string(what) + ": need matching arrays with >= 2 entries");
    for (std::size_t k = 0; k + 1 < p.abscissas.size(); ++k)
        if (!(p.abscissas[k + 1] > p.abscissas[k]))
            throw ConfigError(std::string(what) + ": abscissas must be strictly increasing");
    for (double v : p.values)
        if (!(v > 0.0)) throw ConfigError(std::string(what) + ": values must be positive");
}

std::size_t locate(const std::vector<double>& xs, double u) {
    if (u <= xs.front()) return 0;
    if (u >= xs[xs.size() - 2]) return xs.size() - 2;
    const auto it = std::upper_bound(xs.begin(), xs.end(), u);
    return static_cast<std::size_t>(it - xs.begin()) - 1;
}

} // namespace

double LinearProfile::operator()(double u) const {
    if (u <= abscissas.front()) return values.front();
    if (u >= abscissas.back()) return values.back();
    const std::size_t k = locate(abscissas, u);
    const double w = (u - abscissas[k]) / (abscissas[k + 1] - abscissas[k]);
    return values[k] + w * (values[k + 1] - values[k]);
}

double LinearProfile::max_slope_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k + 1 < abscissas.size(); ++k)
        m = std::max(m, std::abs(values[k + 1] - values[k]) /
                            (abscissas[k + 1] - abscissas[k]));
    return m;
}

double LinearProfile::max_on(double lo, double hi) const {
    double m = std::max((*this)(lo), (*this)(hi));
    for (std::size_t k = 0; k < abscissas.size(); ++k)
        if (abscissas[k] > lo && abscissas[k] < hi) m = std::max(m, values[k]);
    return m;
}

double LinearProfile::min_value() const {
    return *std::min_element(values.begin(), values.end());
}

DriftField DriftField::constant(double value) {
    if (!(value > 0.0)) throw ConfigError("constant drift must be positive");
    DriftField f;
    f.kind_ = Kind::Constant;
    f.value_ = value;
    f.lipschitz_x_ = 0.0;
    return f;
}

DriftField DriftField::separable(LinearProfile time_profile, LinearProfile space_profile) {
    check_profile(time_profile, "drift time profile");
    check_profile(space_profile, "drift space profile");
    DriftField f;
    f.kind_ = Kind::SeparableProduct;
    f.time_ = std::move(time_profile);
    f.space_ = std::move(space_profile);
    // |F(t,x)-F(t,y)| <= max_t(time) * max-slope(space) * |x-y|
    f.lipschitz_x_ = f.time_.max_on(f.time_.abscissas.front(), f.time_.abscissas.back()) *
                     f.space_.max_slope_abs();
    return f;
}

DriftField DriftField::tabulated2d(std::vector<double> times, std::vector<double> xs,
                                   std::vector<std::vector<double>> values) {
    if (times.size() < 2 || xs.size() < 2) throw ConfigError("2d drift table too small");
    if (values.size() != times.size()) throw ConfigError("2d drift table row count mismatch");
    for (const auto& row : values) {
        if (row.size() != xs.size()) throw ConfigError("2d drift table column count mismatch");
        for (double v : row)
            if (!(v > 0.0)) throw ConfigError("2d drift values must be positive");
    }
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        if (!(times[k + 1] > times[k])) throw ConfigError("2d drift times must increase");
    for (std::size_t k = 0; k + 1 < xs.size(); ++k)
        if (!(xs[k + 1] > xs[k])) throw ConfigError("2d drift xs must increase");

    DriftField f;
    f.kind_ = Kind::Tabulated2D;
    f.grid_t_ = std::move(times);
    f.grid_x_ = std::move(xs);
    f.grid_v_ = std::move(values);
    double lip = 0.0;
    for (const auto& row : f.grid_v_)
        for (std::size_t j = 0; j + 1 < row.size(); ++j)
            lip = std::max(lip, std::abs(row[j + 1] - row[j]) /
                                    (f.grid_x_[j + 1] - f.grid_x_[j]));
    f.lipschitz_x_ = lip;
    return f;
}

double DriftField::operator()(double t, double x) const {
    switch (kind_) {
    case Kind::Constant:
        return value_;
    case Kind::SeparableProduct:
        return time_(t) * space_(x);
    case Kind::Tabulated2D: {
        const double tc = std::clamp(t, grid_t_.front(), grid_t_.back());
        const double xc = std::clamp(x, grid_x_.front(), grid_x_.back());
        const std::size_t i = locate(grid_t_, tc);
        const std::size_t j = locate(grid_x_, xc);
        const double wt = (tc - grid_t_[i]) / (grid_t_[i + 1] - grid_t_[i]);
        const double wx = (xc - grid_x_[j]) / (grid_x_[j + 1] - grid_x_[j]);
        const double a = grid_v_[i][j] + wx * (grid_v_[i][j + 1] - grid_v_[i][j]);
        const double b = grid_v_[i + 1][j] + wx * (grid_v_[i + 1][j + 1] - grid_v_[i + 1][j]);
        return a + wt * (b - a);
    }
    }
    return value_;
}

double DriftField::max_on(double t0, double t1, double x0, double x1) const {
    switch (kind_) {
    case Kind::Constant:
        return value_;
    case Kind::SeparableProduct:
        return time_.max_on(t0, t1) * space_.max_on(x0, x1);
    case Kind::Tabulated2D: {
        // Bilinear per cell, so the max over a rectangle is attained on the
        // lattice of {window corners} x {grid lines inside the window}.
        std::vector<double> ts{t0, t1}, xs{x0, x1};
        for (double t : grid_t_)
            if (t > t0 && t < t1) ts.push_back(t);
        for (double x : grid_x_)
            if (x > x0 && x < x1) xs.push_back(x);
        double m = -std::numeric_limits<double>::infinity();
        for (double t : ts)
            for (double x : xs) m = std::max(m, (*this)(t, x));
        return m;
    }
    }
    return value_;
}

double DriftField::min_value() const {
    switch (kind_) {
    case Kind::Constant:
        return value_;
    case Kind::SeparableProduct:
        return time_.min_value() * space_.min_value();
    case Kind::Tabulated2D: {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& row : grid_v_)
            for (double v : row) m = std::min(m, v);
        return m;
    }
    }
    return value_;
}

} // namespace ftl
