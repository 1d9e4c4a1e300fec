#include "ftl/leader.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

namespace {

/// PCHIP-style node slopes: harmonic mean of adjacent secants, zero at flats.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& x) {
    const std::size_t n = t.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (x[k + 1] - x[k]) / (t[k + 1] - t[k]);
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] <= 0.0 || d[k] <= 0.0) {
            m[k] = 0.0;
        } else {
            const double w1 = 2 * (t[k + 1] - t[k]) + (t[k] - t[k - 1]);
            const double w2 = (t[k + 1] - t[k]) + 2 * (t[k] - t[k - 1]);
            m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
    return m;
}

/// Extrema of the segment velocity (a quadratic in the local coordinate).
/// include_left controls whether u = 0 participates in the minimum; the
/// positivity requirement holds on (0, T] only, so the very first node is
/// allowed to start at rest.
void segment_velocity_range(double h, double x0, double x1, double m0, double m1,
                            bool include_left, double& vmin, double& vmax) {
    const double delta = (x1 - x0) / h;
    const double a = -6 * delta + 3 * m0 + 3 * m1;
    const double b = 6 * delta - 4 * m0 - 2 * m1;
    const double c = m0;
    auto eval = [&](double u) { return (a * u + b) * u + c; };
    vmin = eval(1.0);
    vmax = std::max(eval(0.0), eval(1.0));
    if (include_left) vmin = std::min(vmin, eval(0.0));
    if (std::abs(a) > 0.0) {
        const double u = -b / (2 * a);
        if (u > 0.0 && u < 1.0) {
            vmin = std::min(vmin, eval(u));
            vmax = std::max(vmax, eval(u));
        }
    }
}

} // namespace

LeaderTrajectory LeaderTrajectory::constant_speed(double x0, double speed) {
    if (!(speed > 0.0)) throw ConfigError("leader speed must be positive");
    LeaderTrajectory l;
    l.kind_ = Kind::ConstantSpeed;
    l.x0_ = x0;
    l.speed_ = speed;
    return l;
}

LeaderTrajectory LeaderTrajectory::tabulated(std::vector<double> times,
                                             std::vector<double> positions) {
    if (times.size() != positions.size() || times.size() < 2)
        throw ConfigError("leader table needs matching arrays with >= 2 entries");
    if (times.front() != 0.0) throw ConfigError("leader table must start at t = 0");
    for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        if (!(times[k + 1] > times[k])) throw ConfigError("leader times must increase");
        if (positions[k + 1] < positions[k])
            throw ConfigError("leader positions must be nondecreasing");
    }
    LeaderTrajectory l;
    l.kind_ = Kind::Tabulated;
    l.x0_ = positions.front();
    l.speed_ = 0.0;
    l.track_ = MonotoneTrack(times, positions, pchip_slopes(times, positions));
    l.times_ = std::move(times);
    l.positions_ = std::move(positions);
    return l;
}

double LeaderTrajectory::position(double t) const {
    if (kind_ == Kind::ConstantSpeed) return x0_ + speed_ * t;
    return track_.position(t);
}

double LeaderTrajectory::velocity(double t) const {
    if (kind_ == Kind::ConstantSpeed) return speed_;
    return track_.velocity(t);
}

double LeaderTrajectory::max_velocity(double horizon) const {
    if (kind_ == Kind::ConstantSpeed) return speed_;
    double vmax = 0.0;
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
        if (times_[k] >= horizon) break;
        double lo, hi;
        segment_velocity_range(times_[k + 1] - times_[k], positions_[k], positions_[k + 1],
                               track_.velocity(times_[k]), track_.velocity(times_[k + 1]),
                               true, lo, hi);
        vmax = std::max(vmax, hi);
    }
    return vmax;
}

bool LeaderTrajectory::strictly_increasing(double horizon) const {
    if (kind_ == Kind::ConstantSpeed) return speed_ > 0.0;
    for (std::size_t k = 0; k + 1 < times_.size(); ++k) {
        if (times_[k] >= horizon) break;
        double lo, hi;
        segment_velocity_range(times_[k + 1] - times_[k], positions_[k], positions_[k + 1],
                               track_.velocity(times_[k]), track_.velocity(times_[k + 1]),
                               /*include_left=*/k > 0, lo, hi);
        if (!(lo > 0.0)) return false;
    }
    return true;
}

} // namespace ftl
