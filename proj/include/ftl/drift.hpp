#pragma once

#include <vector>

namespace ftl {

/// Piecewise-linear scalar profile with constant extension outside its table.
struct LinearProfile {
    std::vector<double> abscissas;
    std::vector<double> values;

    double operator()(double u) const;
    double max_slope_abs() const;
    double max_on(double lo, double hi) const;
    double min_value() const;

    bool operator==(const LinearProfile&) const = default;
};

/// External drift F(t, x): continuous, strictly positive, with a known
/// Lipschitz constant in x (supplied analytically or computed from the table).
class DriftField {
public:
    enum class Kind { Constant, SeparableProduct, Tabulated2D };

    static DriftField constant(double value);
    static DriftField separable(LinearProfile time_profile, LinearProfile space_profile);
    static DriftField tabulated2d(std::vector<double> times, std::vector<double> xs,
                                  std::vector<std::vector<double>> values);

    double operator()(double t, double x) const;
    double lipschitz_x() const { return lipschitz_x_; }
    /// Exact maximum over [t0,t1] x [x0,x1] (the field is multilinear per cell).
    double max_on(double t0, double t1, double x0, double x1) const;
    double min_value() const;

    Kind kind() const { return kind_; }
    double constant_value() const { return value_; }
    const LinearProfile& time_profile() const { return time_; }
    const LinearProfile& space_profile() const { return space_; }
    const std::vector<double>& grid_times() const { return grid_t_; }
    const std::vector<double>& grid_xs() const { return grid_x_; }
    const std::vector<std::vector<double>>& grid_values() const { return grid_v_; }

    bool operator==(const DriftField&) const = default;

private:
    DriftField() = default;

    Kind kind_ = Kind::Constant;
    double value_ = 1.0;
    LinearProfile time_, space_;
    std::vector<double> grid_t_, grid_x_;
    std::vector<std::vector<double>> grid_v_; // [time][x]
    double lipschitz_x_ = 0.0;
};

} // namespace ftl
