#include "ftl/config.hpp"
#include "ftl/csvio.hpp"
#include "ftl/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ftl;

TEST_CASE("density of a gap") {
    CHECK(density_of_gap(0.5, 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(density_of_gap(1.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(density_of_gap(0.001, 100) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_THROWS_AS(density_of_gap(0.0, 4), DegenerateGap);
    CHECK_THROWS_AS(density_of_gap(-0.1, 4), DegenerateGap);
}

TEST_CASE("power-law profile values") {
    const auto p1 = NonlinearityProfile::power_law(1.0, 1.0);
    const auto p2 = NonlinearityProfile::power_law(2.0, 1.0);
    CHECK(p1(0.0) == 1.0);
    CHECK(p2(1.0) == 0.0);
    CHECK(p2(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p2(3.0) == 0.0);
    CHECK_THROWS_AS(p1(-1e-9), InvalidDensity);
}

TEST_CASE("profiles vanish exactly at and beyond the threshold") {
    const auto power = NonlinearityProfile::power_law(3.0, 0.8);
    const auto table = NonlinearityProfile::tabulated({0.0, 0.3, 0.8, 1.0},
                                                      {1.0, 0.4, 0.0, 0.0});
    for (const auto& p : {power, table}) {
        CHECK(p.threshold() == doctest::Approx(0.8));
        for (double d : {1e-6, 1e-3, 0.1}) {
            CHECK(p(p.threshold() + d) == 0.0);
            CHECK(p(p.threshold() - d) > 0.0);
        }
        CHECK(p(p.threshold()) == 0.0);
    }
}

TEST_CASE("profiles are nonincreasing and nonnegative (sampled)") {
    const auto power = NonlinearityProfile::power_law(1.7, 1.2);
    const auto table =
        NonlinearityProfile::tabulated({0.0, 0.2, 0.5, 0.9, 1.1}, {2.0, 1.5, 0.7, 0.1, 0.0});
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (const auto& p : {power, table}) {
        for (int k = 0; k < 500; ++k) {
            double r1 = u(rng), r2 = u(rng);
            if (r1 > r2) std::swap(r1, r2);
            CHECK(p(r1) >= p(r2));
            CHECK(p(r2) >= 0.0);
        }
    }
}

TEST_CASE("invalid tabulated profiles are rejected") {
    CHECK_THROWS_AS(NonlinearityProfile::tabulated({0.0, 1.0}, {1.0, 0.5}), ConfigError);
    CHECK_THROWS_AS(NonlinearityProfile::tabulated({0.0, 0.5, 1.0}, {1.0, 1.2, 0.0}),
                    ConfigError);
    CHECK_THROWS_AS(NonlinearityProfile::tabulated({0.0, 1.0}, {0.0, 0.0}), ConfigError);
}

namespace {

ParticleSystemConfig two_particle(double mid) {
    ParticleSystemConfig cfg;
    cfg.n_particles = 2;
    cfg.initial_positions = {0.0, mid, 1.0};
    cfg.initial_velocities = {std::optional<double>(0.0), std::optional<double>(0.0)};
    cfg.leader = LeaderTrajectory::constant_speed(1.0, 1.0);
    return cfg;
}

} // namespace

TEST_CASE("validation: uniform spacing at the threshold is saturated") {
    const auto v = validate_config(two_particle(0.5));
    CHECK(v.initial_density[0] == doctest::Approx(1.0));
    CHECK(v.initial_density[1] == doctest::Approx(1.0));
    CHECK(v.saturated_indexes == std::vector<int>{0, 1});
    CHECK(v.vtilde0 == std::vector<double>{0.0, 0.0});
}

TEST_CASE("validation: overdense initial cell is rejected with its index") {
    const auto issues = check_config(two_particle(0.4)); // rho_0 = 1/(2*0.4) = 1.25
    REQUIRE(!issues.empty());
    bool found = false;
    for (const auto& it : issues)
        if (it.field == "initial_positions" && it.index == 0) found = true;
    CHECK(found);
    CHECK_THROWS_AS(validate_config(two_particle(0.4)), ConfigError);
}

TEST_CASE("validation: wide spacing is unsaturated") {
    ParticleSystemConfig cfg;
    cfg.n_particles = 4;
    cfg.initial_positions = {0.0, 2.0, 4.0, 6.0, 8.0};
    cfg.initial_velocities.assign(4, std::optional<double>(0.0));
    cfg.zeta = NonlinearityProfile::power_law(1.0, 0.5, ProfileRole::Alertness);
    cfg.leader = LeaderTrajectory::constant_speed(8.0, 1.0);
    const auto v = validate_config(cfg);
    CHECK(v.saturated_indexes.empty());
    for (double rho : v.initial_density) CHECK(rho == doctest::Approx(0.125));
}

TEST_CASE("validation: alertness threshold above congestion threshold is rejected") {
    auto cfg = two_particle(0.5);
    cfg.zeta = NonlinearityProfile::power_law(1.0, 2.0, ProfileRole::Alertness);
    cfg.theta = NonlinearityProfile::power_law(1.0, 1.0);
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("validation: negative velocity and unordered positions are rejected") {
    auto cfg = two_particle(0.6);
    cfg.initial_velocities = {std::optional<double>(-0.5), std::optional<double>(0.0)};
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    cfg = two_particle(0.6);
    cfg.initial_positions = {0.0, 0.7, 0.6};
    cfg.leader = LeaderTrajectory::constant_speed(0.6, 1.0);
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("validation is idempotent") {
    auto cfg = two_particle(0.6);
    cfg.initial_velocities = {std::optional<double>(0.2), std::optional<double>(0.3)};
    const auto v1 = validate_config(cfg);
    const auto v2 = validate_config(v1.cfg);
    CHECK(v1.cfg.delta == v2.cfg.delta);
    CHECK(v1.initial_density == v2.initial_density);
    CHECK(v1.saturated_indexes == v2.saturated_indexes);
    CHECK(v1.vtilde0 == v2.vtilde0);
    CHECK(v1.start_velocity == v2.start_velocity);
    CHECK(v1.velocity_bound == v2.velocity_bound);
    CHECK(serialize_config(v1.cfg) == serialize_config(v2.cfg));
}

TEST_CASE("saturated start velocity follows the quasi-steady rule by default") {
    auto cfg = two_particle(0.5); // both saturated at rho = 1
    cfg.theta = NonlinearityProfile::power_law(1.0, 1.5);
    cfg.zeta = NonlinearityProfile::power_law(1.0, 0.5, ProfileRole::Alertness);
    cfg.drift = DriftField::constant(2.0);
    cfg.gamma = 4.0;
    auto v = validate_config(cfg);
    // theta(1) = 1 - 1/1.5 = 1/3; v = theta * F / gamma = (1/3)*2/4.
    CHECK(v.start_velocity[0] == doctest::Approx((1.0 / 3.0) * 2.0 / 4.0).epsilon(1e-14));
    CHECK(v.vtilde0[0] == 0.0);

    cfg.saturated_start = SaturatedStart::Zero;
    v = validate_config(cfg);
    CHECK(v.start_velocity[0] == 0.0);
}

TEST_CASE("default regularization shrinks with N") {
    CHECK(default_delta(2) == doctest::Approx(std::min(1e-3, 0.25)));
    CHECK(default_delta(100) == doctest::Approx(1e-4));
    CHECK(default_delta(10) == doctest::Approx(1e-3));
}

TEST_CASE("drift fields: positivity, Lipschitz constant, window max") {
    const auto c = DriftField::constant(2.0);
    CHECK(c(0.3, 17.0) == 2.0);
    CHECK(c.lipschitz_x() == 0.0);
    CHECK(c.max_on(0, 1, -5, 5) == 2.0);
    CHECK_THROWS_AS(DriftField::constant(0.0), ConfigError);

    const auto s = DriftField::separable({{0.0, 1.0}, {1.0, 2.0}}, {{0.0, 4.0}, {1.0, 3.0}});
    CHECK(s(0.0, 0.0) == doctest::Approx(1.0 * 4.0));
    CHECK(s(1.0, 1.0) == doctest::Approx(2.0 * 3.0));
    CHECK(s(2.0, 9.0) == doctest::Approx(2.0 * 3.0)); // clamped extension
    CHECK(s.lipschitz_x() == doctest::Approx(2.0 * 1.0));
    CHECK(s.max_on(0.0, 1.0, 0.0, 1.0) == doctest::Approx(2.0 * 4.0));

    const auto t = DriftField::tabulated2d({0.0, 1.0}, {0.0, 1.0},
                                           {{1.0, 2.0}, {3.0, 5.0}});
    CHECK(t(0.0, 0.0) == doctest::Approx(1.0));
    CHECK(t(1.0, 1.0) == doctest::Approx(5.0));
    CHECK(t(0.5, 0.5) == doctest::Approx((1.5 + 4.0) / 2.0));
    CHECK(t.lipschitz_x() == doctest::Approx(2.0));
    CHECK(t.max_on(0.0, 0.5, 0.0, 1.0) == doctest::Approx((2.0 + 5.0) / 2.0));
    CHECK(t.min_value() == doctest::Approx(1.0));
}

TEST_CASE("leader trajectories") {
    const auto c = LeaderTrajectory::constant_speed(1.0, 0.5);
    CHECK(c.position(2.0) == doctest::Approx(2.0));
    CHECK(c.velocity(2.0) == 0.5);
    CHECK(c.strictly_increasing(1.0));

    const auto t = LeaderTrajectory::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 1.5});
    CHECK(t.position(0.0) == 0.0);
    CHECK(t.position(2.0) == doctest::Approx(1.5));
    CHECK(t.position(0.5) > 0.0);
    CHECK(t.strictly_increasing(2.0));
    CHECK(t.max_velocity(2.0) >= 0.5);

    const auto frozen = LeaderTrajectory::tabulated({0.0, 1.0}, {2.0, 2.0});
    CHECK(frozen.position(0.7) == doctest::Approx(2.0));
    CHECK_FALSE(frozen.strictly_increasing(1.0));

    CHECK_THROWS_AS(LeaderTrajectory::tabulated({0.0, 1.0}, {1.0, 0.5}), ConfigError);
}

TEST_CASE("config round-trips through the text format") {
    auto cfg = two_particle(0.6);
    cfg.initial_velocities = {std::optional<double>(0.125), std::optional<double>{}};
    cfg.epsilon = 0.75;
    cfg.delta = 1e-4;
    cfg.theta = NonlinearityProfile::power_law(2.0, 1.1);
    cfg.zeta = NonlinearityProfile::tabulated({0.0, 0.4, 0.9}, {1.0, 0.2, 0.0},
                                              ProfileRole::Alertness);
    cfg.drift = DriftField::separable({{0.0, 1.0}, {1.0, 1.5}}, {{0.0, 2.0}, {1.0, 1.0}});
    cfg.leader = LeaderTrajectory::tabulated({0.0, 0.5, 1.0}, {1.0, 1.3, 1.9});

    const std::string text = serialize_config(cfg);
    const auto back = parse_config_text(text, "roundtrip");
    CHECK(serialize_config(back) == text);
    CHECK(config_hash_hex(back) == config_hash_hex(cfg));
}

TEST_CASE("config parse errors carry line and field") {
    const std::string bad = "n_particles = 2\nepsilon = oops\n";
    try {
        parse_config_text(bad, "mem");
        CHECK(false);
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("mem:2") != std::string::npos);
        CHECK(msg.find("epsilon") != std::string::npos);
    }
}
