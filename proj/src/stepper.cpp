#include "ftl/stepper.hpp"

#include "ftl/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ftl {

ExpWeights exp_weights(double z) {
    ExpWeights w{};
    if (z < 1e-2) {
        // Series, to dodge the cancellations in the closed forms.
        w.decay = std::exp(-z);
        w.w0 = z * (0.5 + z * (-1.0 / 3.0 + z * (0.125 + z * (-1.0 / 30.0 + z / 144.0))));
        w.w1 = z * (0.5 + z * (-1.0 / 6.0 + z * (1.0 / 24.0 + z * (-1.0 / 120.0 + z / 720.0))));
        w.phi1 = 1.0 + z * (-0.5 + z * (1.0 / 6.0 + z * (-1.0 / 24.0 + z * (1.0 / 120.0 - z / 720.0))));
        w.p0 = z * (1.0 / 3.0 + z * (-0.125 + z * (1.0 / 30.0 + z * (-1.0 / 144.0 + z / 840.0))));
        w.p1 = z * (1.0 / 6.0 + z * (-1.0 / 24.0 + z * (1.0 / 120.0 + z * (-1.0 / 720.0 + z / 5040.0))));
        return w;
    }
    const double e = std::exp(-z);
    w.decay = e;
    w.w0 = (1.0 - (1.0 + z) * e) / z;
    w.w1 = (z - 1.0 + e) / z;
    w.phi1 = (1.0 - e) / z;
    w.p0 = 0.5 - w.w0 / z;
    w.p1 = 0.5 - w.w1 / z;
    return w;
}

StepPoint exp_step(const StepPoint& s, double h, double a0, double q0, double a1, double q1) {
    if (h <= 0.0) return s;
    const double abar = 0.5 * (a0 + a1);
    const ExpWeights w = exp_weights(abar * h);
    StepPoint out;
    out.t = s.t + h;
    out.v = s.v * w.decay + q0 * w.w0 + q1 * w.w1;
    out.x = s.x + h * (s.v * w.phi1 + q0 * w.p0 + q1 * w.p1);
    return out;
}

namespace {

struct Attempt {
    StepPoint end;
    LocalCoeffs end_coeffs;
    bool gap_ok = true;
};

/// Predict with coefficients frozen at the start, evaluate the model at the
/// predicted endpoint, correct once with the linear reconstruction.
Attempt attempt_step(const StepPoint& s, double h, const LocalCoeffs& c0, const CoeffFn& model,
                     double gap_reject) {
    Attempt a;
    const StepPoint pred = exp_step(s, h, c0.a, c0.q, c0.a, c0.q);
    const LocalCoeffs cp = model(pred.t, pred.x);
    if (!(cp.gap > gap_reject)) {
        a.gap_ok = false;
        return a;
    }
    a.end = exp_step(s, h, c0.a, c0.q, cp.a, cp.q);
    a.end_coeffs = model(a.end.t, a.end.x);
    if (!(a.end_coeffs.gap > gap_reject)) a.gap_ok = false;
    return a;
}

} // namespace

void step_particle(StepperState& st, const CoeffFn& model, const StepControls& c,
                   double t_limit) {
    const double gap_reject = c.gap_floor - 10.0 * c.tol * c.x_scale;
    LocalCoeffs c0 = model(st.p.t, st.p.x);
    if (!(c0.gap > gap_reject))
        throw OrderingViolation("gap " + std::to_string(c0.gap) +
                                " at the ordering floor before stepping, t = " +
                                std::to_string(st.p.t));

    double h = st.h;
    if (c.h_max > 0.0) h = std::min(h, c.h_max);
    // Stiffness cap: while the alertness is (nearly) degenerate and the state
    // still has somewhere to relax to, resolve the e-folding time 1/a by at
    // least a factor two. Floored to stay machine-feasible.
    if (c.stiff_zeta_cut >= 0.0 && c0.zeta <= c.stiff_zeta_cut && c0.a > 0.0 &&
        (st.p.v > 1e-14 * c.v_scale || c0.q > 1e-14 * c.v_scale)) {
        h = std::min(h, std::max(0.5 / c0.a, c.stiff_floor));
    }
    h = std::min(h, t_limit - st.p.t);
    if (!(h > 0.0)) return;

    for (;;) {
        bool ok = false;
        StepPoint result;
        double err_norm = 0.0;

        const Attempt full = attempt_step(st.p, h, c0, model, gap_reject);
        if (full.gap_ok) {
            const Attempt h1 = attempt_step(st.p, 0.5 * h, c0, model, gap_reject);
            if (h1.gap_ok) {
                const Attempt h2 =
                    attempt_step(h1.end, 0.5 * h, h1.end_coeffs, model, gap_reject);
                if (h2.gap_ok) {
                    const double ev = std::abs(full.end.v - h2.end.v) / (c.tol * c.v_scale);
                    const double ex = std::abs(full.end.x - h2.end.x) / (c.tol * c.x_scale);
                    err_norm = std::max(ev, ex);
                    if (err_norm <= 1.0) {
                        ok = true;
                        result = h2.end;
                    }
                }
            }
        }

        if (ok) {
            st.p = result;
            // Snap onto the target time; the two half steps accumulate rounding.
            if (std::abs(t_limit - st.p.t) < 1e-12 * std::max(1.0, std::abs(t_limit)))
                st.p.t = t_limit;
            ++st.accepted;
            const double grow =
                err_norm > 0.0 ? 0.9 * std::pow(err_norm, -1.0 / 3.0) : 4.0;
            st.h = h * std::clamp(grow, 0.2, 4.0);
            if (c.h_max > 0.0) st.h = std::min(st.h, c.h_max);
            return;
        }

        ++st.rejected;
        const double shrink =
            err_norm > 1.0 ? std::max(0.1, 0.9 * std::pow(err_norm, -1.0 / 3.0)) : 0.5;
        h *= shrink;
        if (h < c.h_min) {
            if (!full.gap_ok)
                throw OrderingViolation(
                    "ordering floor reached at t = " + std::to_string(st.p.t) +
                    " and the step cannot shrink further");
            throw StepUnderflow("step size underflow at t = " + std::to_string(st.p.t));
        }
    }
}

} // namespace ftl
