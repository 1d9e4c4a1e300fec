#pragma once

#include <vector>

namespace ftl {

/// Monotone C1 cubic Hermite interpolant of a nondecreasing time series.
/// Node slopes are clamped into the Fritsch-Carlson region [0, 3*secant],
/// which preserves monotonicity cell by cell; for accurate solver output the
/// clamp never engages.
class MonotoneTrack {
public:
    MonotoneTrack() = default;
    MonotoneTrack(std::vector<double> times, std::vector<double> values,
                  std::vector<double> slopes);

    double position(double t) const;
    double velocity(double t) const;

    double front_time() const { return t_.front(); }
    double back_time() const { return t_.back(); }
    std::size_t size() const { return t_.size(); }

private:
    std::size_t locate(double t) const;

    std::vector<double> t_, x_, m_;
};

} // namespace ftl
