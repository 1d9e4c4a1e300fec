#include "ftl/stepper.hpp"

#include "ftl/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ftl;

TEST_CASE("exponential weights match their closed forms") {
    // Reference values computed with 30-digit arithmetic.
    struct Ref {
        double z, decay, w0, w1, phi1, p0, p1;
    };
    const Ref refs[] = {
        {0.005, 0.995012479192682313, 0.00249168227085501613, 0.00249583853646267051,
         0.997504161463537329, 0.00166354582899677308, 0.00083229270746589743},
        {0.5, 0.606530659712633424, 0.180408020862099729, 0.213061319425266847,
         0.786938680574733153, 0.139183958275800542, 0.0738773611494663056},
        {2.0, 0.135335283236612692, 0.296997075145080962, 0.567667641618306346,
         0.432332358381693654, 0.351501462427459519, 0.216166179190846827},
    };
    for (const auto& r : refs) {
        const ExpWeights w = exp_weights(r.z);
        CHECK(w.decay == doctest::Approx(r.decay).epsilon(1e-14));
        CHECK(w.w0 == doctest::Approx(r.w0).epsilon(1e-12));
        CHECK(w.w1 == doctest::Approx(r.w1).epsilon(1e-12));
        CHECK(w.phi1 == doctest::Approx(r.phi1).epsilon(1e-14));
        CHECK(w.p0 == doctest::Approx(r.p0).epsilon(1e-12));
        CHECK(w.p1 == doctest::Approx(r.p1).epsilon(1e-12));
    }
}

TEST_CASE("weights are continuous across the series/direct switch") {
    const ExpWeights lo = exp_weights(0.01 * (1.0 - 1e-9));
    const ExpWeights hi = exp_weights(0.01 * (1.0 + 1e-9));
    CHECK(lo.w0 == doctest::Approx(hi.w0).epsilon(1e-10));
    CHECK(lo.w1 == doctest::Approx(hi.w1).epsilon(1e-10));
    CHECK(lo.p0 == doctest::Approx(hi.p0).epsilon(1e-10));
    CHECK(lo.p1 == doctest::Approx(hi.p1).epsilon(1e-10));
}

TEST_CASE("constant-coefficient stiff step reproduces the closed form") {
    // Relaxation time 0.5 means rate a = 2; forcing level q = 2; unit step from rest:
    // v = 2 (1 - e^{-2}).
    const StepPoint out = exp_step({0.0, 0.0, 0.0}, 1.0, 2.0, 2.0, 2.0, 2.0);
    CHECK(out.v == doctest::Approx(1.7293294335267746).epsilon(1e-13));
    CHECK(out.t == 1.0);
}

TEST_CASE("pure decay step") {
    // No forcing, rate 1, unit step: v = e^{-1}.
    const StepPoint out = exp_step({0.0, 0.0, 1.0}, 1.0, 1.0, 0.0, 1.0, 0.0);
    CHECK(out.v == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    // Position advances by the exact integral of the decaying velocity: 1 - e^{-1}.
    CHECK(out.x == doctest::Approx(1.0 - 0.36787944117144233).epsilon(1e-13));
}

TEST_CASE("zero step leaves the state unchanged") {
    const StepPoint s{0.25, 1.5, 0.75};
    const StepPoint out = exp_step(s, 0.0, 3.0, 2.0, 3.0, 2.0);
    CHECK(out.t == s.t);
    CHECK(out.x == s.x);
    CHECK(out.v == s.v);
}

TEST_CASE("velocity stays inside the box for any step size and data") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> uh(0.0, 5.0), ua(0.0, 6.0), uq(0.0, 3.0),
        uv(0.0, 3.0);
    for (int k = 0; k < 3000; ++k) {
        const double v = uv(rng), h = uh(rng);
        const double a0 = std::exp(ua(rng)) - 1.0, a1 = std::exp(ua(rng)) - 1.0;
        const double q0 = uq(rng), q1 = uq(rng);
        const StepPoint out = exp_step({0.0, 0.0, v}, h, a0, q0, a1, q1);
        const double box = std::max({v, q0, q1});
        CHECK(out.v >= 0.0);
        CHECK(out.v <= box * (1.0 + 1e-12) + 1e-300);
        CHECK(out.x >= 0.0); // positions never step backwards
    }
}

TEST_CASE("stiff limit lands on the endpoint quasi-steady velocity") {
    const StepPoint out = exp_step({0.0, 0.0, 0.3}, 1.0, 1e8, 0.7, 1e8, 0.9);
    CHECK(out.v == doctest::Approx(0.9).epsilon(1e-7));
    // Position integral approaches the average of the quasi-steady values.
    CHECK(out.x == doctest::Approx(0.5 * (0.7 + 0.9)).epsilon(1e-6));
}

TEST_CASE("second-order accuracy on a smooth variable-coefficient problem") {
    // v' = a(t)(q(t) - v) with a = 2 + sin t, q = 1 + 0.5 cos t. Reference by
    // tiny fixed steps of the same scheme (self-convergence estimates order).
    auto a_of = [](double t) { return 2.0 + std::sin(t); };
    auto q_of = [](double t) { return 1.0 + 0.5 * std::cos(t); };
    auto integrate = [&](int steps) {
        StepPoint s{0.0, 0.0, 0.2};
        const double h = 1.0 / steps;
        for (int i = 0; i < steps; ++i) {
            const double t0 = s.t, t1 = s.t + h;
            s = exp_step(s, h, a_of(t0), q_of(t0), a_of(t1), q_of(t1));
        }
        return s;
    };
    const StepPoint ref = integrate(1 << 15);
    const double e1 = std::abs(integrate(64).v - ref.v);
    const double e2 = std::abs(integrate(128).v - ref.v);
    const double rate = std::log2(e1 / e2);
    CHECK(rate > 1.7);
    CHECK(rate < 2.6);
}

TEST_CASE("step_particle controls the local error and honors guards") {
    // Constant-coefficient model: results must match the closed form even
    // through the adaptive machinery.
    const CoeffFn model = [](double, double) {
        LocalCoeffs c;
        c.a = 2.0;
        c.q = 2.0;
        c.zeta = 1.0;
        c.gap = 10.0;
        return c;
    };
    StepControls ctl;
    ctl.tol = 1e-10;
    ctl.h_min = 1e-15;
    ctl.h_max = 1.0;
    ctl.v_scale = 2.0;
    ctl.x_scale = 10.0;
    ctl.gap_floor = 0.1;
    StepperState st;
    st.p = {0.0, 0.0, 0.0};
    st.h = 0.5;
    while (st.p.t < 1.0) step_particle(st, model, ctl, 1.0);
    CHECK(st.p.t == 1.0);
    CHECK(st.p.v == doctest::Approx(1.7293294335267746).epsilon(1e-10));
    CHECK(st.accepted > 0);
}

TEST_CASE("step_particle aborts at the ordering floor") {
    // Gap shrinks linearly through the floor; the guard must throw rather
    // than step past it.
    const CoeffFn model = [](double t, double) {
        LocalCoeffs c;
        c.a = 1.0;
        c.q = 1.0;
        c.zeta = 1.0;
        c.gap = 0.2 - t;
        return c;
    };
    StepControls ctl;
    ctl.tol = 1e-8;
    ctl.h_min = 1e-13;
    ctl.h_max = 1.0;
    ctl.v_scale = 1.0;
    ctl.x_scale = 1.0;
    ctl.gap_floor = 0.1;
    StepperState st;
    st.p = {0.0, 0.0, 1.0};
    st.h = 0.05;
    CHECK_THROWS_AS(
        [&] {
            for (int k = 0; k < 100000; ++k) step_particle(st, model, ctl, 1.0);
        }(),
        OrderingViolation);
}
