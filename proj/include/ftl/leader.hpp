#pragma once

#include "ftl/interpolation.hpp"

#include <vector>

namespace ftl {

/// Prescribed trajectory of the front particle: C1, nondecreasing, with an
/// accessible derivative. Tabulated data is interpolated by the monotone
/// cubic used everywhere else in the solver.
class LeaderTrajectory {
public:
    enum class Kind { ConstantSpeed, Tabulated };

    static LeaderTrajectory constant_speed(double x0, double speed);
    static LeaderTrajectory tabulated(std::vector<double> times, std::vector<double> positions);

    double position(double t) const;
    double velocity(double t) const;

    double max_velocity(double horizon) const;
    /// True when the velocity stays positive on (0, horizon], which the
    /// no-congestion conclusions require.
    bool strictly_increasing(double horizon) const;

    Kind kind() const { return kind_; }
    double start() const { return position(0.0); }
    double x0() const { return x0_; }
    double speed() const { return speed_; }
    const std::vector<double>& table_times() const { return times_; }
    const std::vector<double>& table_positions() const { return positions_; }

    bool operator==(const LeaderTrajectory& o) const {
        return kind_ == o.kind_ && x0_ == o.x0_ && speed_ == o.speed_ &&
               times_ == o.times_ && positions_ == o.positions_;
    }

private:
    LeaderTrajectory() = default;

    Kind kind_ = Kind::ConstantSpeed;
    double x0_ = 0.0;
    double speed_ = 1.0;
    std::vector<double> times_, positions_;
    MonotoneTrack track_;
};

} // namespace ftl
