#pragma once

#include <functional>

namespace ftl {

/// Quadrature weights of the exponential (integrating-factor) update over one
/// step, as functions of z = (mean relaxation rate) * (step size):
///   v_end = v * decay + q_start * w0 + q_end * w1
///   x_end = x + h * (v * phi1 + q_start * p0 + q_end * p1)
/// All weights are nonnegative and w0 + w1 = 1 - decay, so the update keeps
/// the velocity inside [0, max(v, q_start, q_end)] for any step size.
struct ExpWeights {
    double decay; // e^{-z}
    double w0;    // (1 - (1+z) e^{-z}) / z
    double w1;    // (z - 1 + e^{-z}) / z
    double phi1;  // (1 - e^{-z}) / z
    double p0;    // 1/2 - w0/z
    double p1;    // 1/2 - w1/z
};

ExpWeights exp_weights(double z);

struct StepPoint {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
};

/// One update of the damped system v' = a(t)(q(t) - v), x' = v over a step of
/// size h, with the relaxation rate frozen at the endpoint mean and the
/// quasi-steady velocity q reconstructed linearly between its endpoint values.
/// Exact for constant coefficients; second-order accurate otherwise, and
/// unconditionally stable.
StepPoint exp_step(const StepPoint& s, double h, double a0, double q0, double a1, double q1);

/// Local model data at a space-time point, produced by the enclosing solver.
struct LocalCoeffs {
    double a = 0.0;    // relaxation rate  gamma / (eps (zeta + delta))
    double q = 0.0;    // quasi-steady velocity  theta F / gamma
    double zeta = 0.0; // alertness value, drives the stiffness cap
    double gap = 0.0;  // distance to the particle ahead
};

using CoeffFn = std::function<LocalCoeffs(double t, double x)>;

struct StepControls {
    double tol = 1e-9;        // relative local error target
    double h_min = 0.0;       // below this the step underflows
    double h_max = 0.0;       // never step farther than this
    double v_scale = 1.0;     // velocity error scale
    double x_scale = 1.0;     // position error scale
    double gap_floor = 0.0;   // ordering guard; reject below floor - 10 tol
    double stiff_zeta_cut = -1.0; // cap steps when zeta falls below this
    double stiff_floor = 0.0;     // but never below this step size
};

/// Adaptive integration state of a single particle.
struct StepperState {
    StepPoint p;
    double h = 0.0; // current step proposal
    long accepted = 0;
    long rejected = 0;
};

/// Advance the state by one accepted step (cut to at most `t_limit`). The
/// error estimate compares one full step against two chained half steps; the
/// state advances with the half-step pair. Throws StepUnderflow or
/// OrderingViolation when no acceptable step exists.
void step_particle(StepperState& st, const CoeffFn& model, const StepControls& c,
                   double t_limit);

} // namespace ftl
