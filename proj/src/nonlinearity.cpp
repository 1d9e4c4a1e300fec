#include "ftl/nonlinearity.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

NonlinearityProfile NonlinearityProfile::power_law(double alpha, double rho_bar,
                                                   ProfileRole role) {
    if (!(alpha >= 1.0)) throw ConfigError("power-law exponent must be >= 1");
    if (!(rho_bar > 0.0)) throw ConfigError("threshold density must be positive");
    NonlinearityProfile p;
    p.kind_ = Kind::PowerLaw;
    p.role_ = role;
    p.alpha_ = alpha;
    p.rho_bar_ = rho_bar;
    return p;
}

NonlinearityProfile NonlinearityProfile::tabulated(std::vector<double> breakpoints,
                                                   std::vector<double> values,
                                                   ProfileRole role) {
    if (breakpoints.size() != values.size() || breakpoints.size() < 2)
        throw ConfigError("tabulated profile needs matching arrays with >= 2 entries");
    if (breakpoints.front() != 0.0)
        throw ConfigError("tabulated profile must start at density 0");
    for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
        if (!(breakpoints[k + 1] > breakpoints[k]))
            throw ConfigError("tabulated breakpoints must be strictly increasing");
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        if (values[k + 1] > values[k])
            throw ConfigError("tabulated profile values must be nonincreasing");
    if (values.back() != 0.0)
        throw ConfigError("tabulated profile must end at value 0 (the threshold)");

    // Threshold = first breakpoint with value 0; values must be positive before it.
    std::size_t zero_at = values.size() - 1;
    while (zero_at > 0 && values[zero_at - 1] == 0.0) --zero_at;
    if (zero_at == 0) throw ConfigError("tabulated profile is identically zero");
    for (std::size_t k = 0; k < zero_at; ++k)
        if (!(values[k] > 0.0))
            throw ConfigError("tabulated profile must be positive below the threshold");

    NonlinearityProfile p;
    p.kind_ = Kind::Tabulated;
    p.role_ = role;
    p.rho_bar_ = breakpoints[zero_at];
    p.bp_ = std::move(breakpoints);
    p.val_ = std::move(values);
    return p;
}

double NonlinearityProfile::operator()(double rho) const {
    if (rho < 0.0) throw InvalidDensity("density must be nonnegative");
    if (rho >= rho_bar_) return 0.0;
    if (kind_ == Kind::PowerLaw) {
        const double base = 1.0 - rho / rho_bar_;
        return alpha_ == 1.0 ? base : std::pow(base, alpha_);
    }
    const auto it = std::upper_bound(bp_.begin(), bp_.end(), rho);
    const auto k = static_cast<std::size_t>(it - bp_.begin()) - 1;
    const double u = (rho - bp_[k]) / (bp_[k + 1] - bp_[k]);
    return val_[k] + u * (val_[k + 1] - val_[k]);
}

double NonlinearityProfile::max_value() const {
    if (kind_ == Kind::PowerLaw) return 1.0;
    return val_.front();
}

double density_of_gap(double gap, int n) {
    if (n < 1) throw ConfigError("particle count must be >= 1");
    if (!(gap > 0.0))
        throw DegenerateGap("nonpositive gap " + std::to_string(gap) +
                            " (particles collided)");
    return 1.0 / (static_cast<double>(n) * gap);
}

} // namespace ftl
