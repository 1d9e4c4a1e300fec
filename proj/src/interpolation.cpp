#include "ftl/interpolation.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ftl {

MonotoneTrack::MonotoneTrack(std::vector<double> times, std::vector<double> values,
                             std::vector<double> slopes)
    : t_(std::move(times)), x_(std::move(values)), m_(std::move(slopes)) {
    if (t_.size() < 2 || t_.size() != x_.size() || t_.size() != m_.size())
        throw FtlError("MonotoneTrack needs matching arrays with at least two nodes");
    for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
        if (!(t_[k + 1] > t_[k])) throw FtlError("MonotoneTrack times must be increasing");
        if (x_[k + 1] < x_[k]) throw FtlError("MonotoneTrack values must be nondecreasing");
    }
    for (std::size_t k = 0; k < m_.size(); ++k) {
        const double left = (k > 0) ? (x_[k] - x_[k - 1]) / (t_[k] - t_[k - 1])
                                    : std::numeric_limits<double>::infinity();
        const double right = (k + 1 < t_.size()) ? (x_[k + 1] - x_[k]) / (t_[k + 1] - t_[k])
                                                 : std::numeric_limits<double>::infinity();
        const double cap = 3.0 * std::min(left, right);
        m_[k] = std::max(m_[k], 0.0);
        if (std::isfinite(cap)) m_[k] = std::min(m_[k], cap);
    }
}

std::size_t MonotoneTrack::locate(double t) const {
    if (t <= t_.front()) return 0;
    if (t >= t_[t_.size() - 2]) return t_.size() - 2;
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    return static_cast<std::size_t>(it - t_.begin()) - 1;
}

double MonotoneTrack::position(double t) const {
    const std::size_t k = locate(t);
    const double h = t_[k + 1] - t_[k];
    const double u = (t - t_[k]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1;
    const double h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2;
    const double h11 = u3 - u2;
    return h00 * x_[k] + h * h10 * m_[k] + h01 * x_[k + 1] + h * h11 * m_[k + 1];
}

double MonotoneTrack::velocity(double t) const {
    const std::size_t k = locate(t);
    const double h = t_[k + 1] - t_[k];
    const double u = (t - t_[k]) / h;
    const double u2 = u * u;
    const double d00 = (6 * u2 - 6 * u) / h;
    const double d10 = 3 * u2 - 4 * u + 1;
    const double d01 = (-6 * u2 + 6 * u) / h;
    const double d11 = 3 * u2 - 2 * u;
    return d00 * x_[k] + d10 * m_[k] + d01 * x_[k + 1] + d11 * m_[k + 1];
}

} // namespace ftl
