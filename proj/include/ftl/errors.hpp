#pragma once

#include <stdexcept>
#include <string>

namespace ftl {

/// Base class for all library failures so callers can catch everything in one place.
struct FtlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Configuration file or validation failure (CLI exit code 2).
struct ConfigError : FtlError {
    using FtlError::FtlError;
};

/// Required input file missing or unreadable (CLI exit code 2).
struct MissingInput : FtlError {
    using FtlError::FtlError;
};

/// A density was requested for a nonpositive inter-particle gap.
struct DegenerateGap : FtlError {
    using FtlError::FtlError;
};

/// Nonlinearity evaluated at a negative density.
struct InvalidDensity : FtlError {
    using FtlError::FtlError;
};

/// Particle ordering lost during integration (CLI exit code 3). The exact
/// dynamics never collides, so this always signals integrator failure or a
/// config outside the model's hypotheses.
struct OrderingViolation : FtlError {
    using FtlError::FtlError;
};

/// Step-size controller could not meet the requested tolerance (exit code 4).
struct ToleranceNotMet : FtlError {
    using FtlError::FtlError;
};

/// Step size shrank below the machine-feasible floor.
struct StepUnderflow : ToleranceNotMet {
    using ToleranceNotMet::ToleranceNotMet;
};

/// Adaptive quadrature failed to converge.
struct QuadratureFailure : FtlError {
    using FtlError::FtlError;
};

/// An a-priori remainder bound was violated (CLI exit code 5).
struct BoundViolated : FtlError {
    using FtlError::FtlError;
};

/// The congestion function vanished on a cell at positive time, which the
/// solved dynamics excludes; indicates solver failure upstream.
struct SaturatedCellAtPositiveTime : FtlError {
    using FtlError::FtlError;
};

/// Two runs that must share a configuration do not.
struct ConfigMismatch : FtlError {
    using FtlError::FtlError;
};

/// Too few usable data points for a fit.
struct InsufficientPoints : FtlError {
    using FtlError::FtlError;
};

} // namespace ftl
