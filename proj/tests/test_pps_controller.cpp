#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ppsde/pps_controller.hpp"

using namespace ppsde;

namespace {

/// Feeds `past` at G = 0 and then `now` for G = 1..L, returning r_L.
double rate_after_window(double past, double now, SwitchParams params = {}) {
    SwitchState s(params);
    s.update_rate(0, past);
    double r = 0.0;
    for (std::size_t g = 1; g <= params.learning_period; ++g) {
        r = s.update_rate(g, now);
    }
    return r;
}

}  // namespace

TEST_SUITE("pps_controller") {

TEST_CASE("change rate arithmetic") {
    CHECK(rate_after_window(10.0, 9.995) == doctest::Approx(5e-4).epsilon(1e-9));
    CHECK(rate_after_window(0.0, -0.01) == doctest::Approx(1e4).epsilon(1e-9));
}

TEST_CASE("change rate is one during the first learning period") {
    SwitchState s;
    for (std::size_t g = 0; g < 25; ++g) {
        CHECK(s.update_rate(g, 100.0 - static_cast<double>(g) * 1e-9) == 1.0);
        CHECK_FALSE(s.should_switch());
    }
}

TEST_CASE("generations must be consecutive") {
    SwitchState s;
    CHECK_THROWS_AS(s.update_rate(1, 0.0), std::invalid_argument);
    s.update_rate(0, 0.0);
    CHECK_THROWS_AS(s.update_rate(2, 0.0), std::invalid_argument);
}

TEST_CASE("switch decision and irreversibility") {
    SwitchParams params;
    params.learning_period = 1;

    SwitchState slow(params);
    slow.update_rate(0, 10.0);
    slow.update_rate(1, 10.0 - 10.0 * 5e-4);
    CHECK(slow.rate() == doctest::Approx(5e-4));
    CHECK(slow.should_switch());
    CHECK(slow.phase() == Phase::pull);
    CHECK(slow.switch_generation() == 1);

    slow.update_rate(2, 10.0 - 10.0 * 5e-4);
    CHECK(slow.rate() == 0.0);
    CHECK_FALSE(slow.should_switch());
    CHECK(slow.phase() == Phase::pull);
    CHECK(slow.switch_generation() == 1);

    SwitchState fast(params);
    fast.update_rate(0, 10.0);
    fast.update_rate(1, 10.0 - 10.0 * 2e-3);
    CHECK_FALSE(fast.should_switch());
    CHECK(fast.phase() == Phase::push);
    CHECK_FALSE(fast.switch_generation().has_value());
}

TEST_CASE("a constant best-f stream switches exactly at G = L") {
    for (const std::size_t L : {1u, 5u, 25u}) {
        SwitchParams params;
        params.learning_period = L;
        SwitchState s(params);
        std::size_t fired = 0;
        std::size_t fired_at = 0;
        for (std::size_t g = 0; g < 3 * L + 2; ++g) {
            s.update_rate(g, 3.25);
            if (s.should_switch()) {
                ++fired;
                fired_at = g;
            }
        }
        CHECK(fired == 1);
        CHECK(fired_at == L);
        CHECK(s.switch_generation() == L);
    }
}

TEST_CASE("phase sequence is push then pull on random streams") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> step(0.0, 0.02);
    for (int rep = 0; rep < 200; ++rep) {
        SwitchParams params;
        params.learning_period = 3;
        SwitchState s(params);
        double f = 1.0;
        bool seen_pull = false;
        for (std::size_t g = 0; g < 60; ++g) {
            f -= step(rng) * step(rng) * f;
            s.update_rate(g, f);
            s.should_switch();
            if (seen_pull) {
                REQUIRE(s.phase() == Phase::pull);
            }
            seen_pull = s.phase() == Phase::pull;
        }
    }
}

TEST_CASE("epsilon schedule examples") {
    SUBCASE("shrink while feasibility is scarce") {
        EpsilonState e;
        e.start(1.0);
        CHECK(e.level(1, 0.0) == doctest::Approx(0.9));
    }
    SUBCASE("cutoff") {
        EpsilonParams params;
        params.cutoff = 100.0;
        EpsilonState e(params);
        e.start(1.0);
        CHECK(e.level(100, 1.0) == 0.0);
        CHECK(e.level(150, 0.0) == 0.0);
    }
    SUBCASE("polynomial decay") {
        EpsilonParams params;
        params.cutoff = 100.0;
        EpsilonState e(params);
        e.start(1.0);
        CHECK(e.level(50, 1.0) == doctest::Approx(0.25));
    }
    SUBCASE("push phase sentinel") {
        EpsilonState e;
        CHECK(std::isinf(e.level(3, 0.5)));
        CHECK(std::isinf(e.current()));
    }
    SUBCASE("k = 0 returns eps_0 and repeated k is memoized") {
        EpsilonState e;
        e.start(0.7);
        CHECK(e.level(0, 0.0) == 0.7);
        const double once = e.level(4, 0.0);
        CHECK(e.level(4, 0.0) == once);
    }
}

TEST_CASE("epsilon step counter may not go backwards") {
    EpsilonState e;
    e.start(1.0);
    e.level(5, 1.0);
    CHECK_THROWS_AS(e.level(4, 1.0), std::invalid_argument);
}

TEST_CASE("shrink branch is strictly decreasing") {
    EpsilonState e;
    e.start(2.0);
    double prev = e.level(0, 0.0);
    for (std::size_t k = 1; k < 90; ++k) {
        const double now = e.level(k, 0.5);
        REQUIRE(now < prev);
        prev = now;
    }
}

TEST_CASE("epsilon stays within [0, eps_0] and reaches zero at the cutoff") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        EpsilonParams params;
        params.cutoff = 1.0 + std::floor(u(rng) * 80);
        EpsilonState e(params);
        const double eps0 = u(rng) * 5;
        e.start(eps0);
        for (std::size_t k = 0; k < 100; ++k) {
            const double level = e.level(k, u(rng));
            REQUIRE(level >= 0.0);
            REQUIRE(level <= eps0);
            if (static_cast<double>(k) >= params.cutoff) {
                REQUIRE(level == 0.0);
            }
        }
    }
}

TEST_CASE("initial epsilon is the nearest-rank percentile") {
    std::vector<double> phis;
    for (int i = 1; i <= 20; ++i) {
        phis.push_back(static_cast<double>(i));
    }
    // ceil(0.95 * 20) = 19
    CHECK(initial_epsilon(phis, 0.95) == 19.0);
    CHECK(initial_epsilon(phis, 1.0) == 20.0);
    CHECK(initial_epsilon(phis, 0.0) == 1.0);
    const std::vector<double> shuffled{0.0, 5.0, 0.0, 2.0};
    CHECK(initial_epsilon(shuffled, 0.95) == 5.0);
    CHECK(initial_epsilon(std::vector<double>{}, 0.95) == 0.0);
}

}  // TEST_SUITE
