#pragma once

#include <string>
#include <vector>

namespace ftl {

enum class ProfileRole { Congestion, Alertness };

/// Nonincreasing, nonnegative, continuous function of the local density that
/// vanishes exactly at and beyond its threshold. Two concrete kinds:
///   - PowerLaw: (1 - rho/rho_bar)^alpha on [0, rho_bar], 0 beyond;
///   - Tabulated: monotone piecewise-linear data, clamped to 0 past the
///     threshold (the first breakpoint with value 0).
class NonlinearityProfile {
public:
    enum class Kind { PowerLaw, Tabulated };

    static NonlinearityProfile power_law(double alpha, double rho_bar,
                                         ProfileRole role = ProfileRole::Congestion);
    static NonlinearityProfile tabulated(std::vector<double> breakpoints,
                                         std::vector<double> values,
                                         ProfileRole role = ProfileRole::Congestion);

    /// Evaluate at density rho >= 0; throws InvalidDensity for rho < 0.
    double operator()(double rho) const;

    double threshold() const { return rho_bar_; }
    /// Maximum value over [0, threshold] (attained at 0 by monotonicity).
    double max_value() const;

    Kind kind() const { return kind_; }
    ProfileRole role() const { return role_; }
    double alpha() const { return alpha_; }
    const std::vector<double>& breakpoints() const { return bp_; }
    const std::vector<double>& values() const { return val_; }

    bool operator==(const NonlinearityProfile&) const = default;

private:
    NonlinearityProfile() = default;

    Kind kind_ = Kind::PowerLaw;
    ProfileRole role_ = ProfileRole::Congestion;
    double alpha_ = 1.0;
    double rho_bar_ = 1.0;
    std::vector<double> bp_, val_; // tabulated data
};

/// Discrete density seen by a particle: 1/(n * gap). Throws DegenerateGap for
/// gap <= 0 (a collision, which the model excludes).
double density_of_gap(double gap, int n);

} // namespace ftl
