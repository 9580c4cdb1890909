#include "flybs/channel.hpp"

#include <doctest.h>

using namespace flybs;

TEST_CASE("distance basics") {
    CHECK(distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(distance({3, 4, 0}, {0, 0, 0}) == doctest::Approx(5.0));
    CHECK(distance({1, 2, 3}, {4, 6, 15}) == doctest::Approx(13.0));
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
    RandomStream rng(7);
    for (int i = 0; i < 200; ++i) {
        const Vec3 a(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(0, 300));
        const Vec3 b(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(0, 300));
        const Vec3 c(rng.uniform(-1e3, 1e3), rng.uniform(-1e3, 1e3), rng.uniform(0, 300));
        CHECK(distance(a, b) == doctest::Approx(distance(b, a)));
        CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
    }
}

TEST_CASE("expected-mode gain equals the power coefficient") {
    LinkParams p;
    p.gamma_coeff = 1.0;
    CHECK(channel_gain(p) == 1.0);
    p.gamma_coeff = 2.5;
    CHECK(channel_gain(p) == 2.5);
}

TEST_CASE("sampled-mode gain is nonnegative with mean converging to gamma") {
    LinkParams p;
    p.gamma_coeff = 1.0;
    p.rician_k = 10.0;
    p.fading = FadingMode::Sampled;
    RandomStream rng(12345);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double g = channel_gain(p, &rng);
        REQUIRE(g >= 0.0);
        sum += g;
    }
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("received power examples") {
    CHECK(received_power(1.0, 1.0, 2.8) == doctest::Approx(1.0));
    CHECK(received_power(1.0, 2.0, 2.0) == doctest::Approx(0.25));
    CHECK(received_power(1.0, 100.0, 2.8) == doctest::Approx(2.512e-6).epsilon(1e-3));
    CHECK_THROWS_AS(received_power(1.0, 0.0, 2.8), std::domain_error);
}

TEST_CASE("received power decreases with distance") {
    RandomStream rng(3);
    for (int i = 0; i < 200; ++i) {
        const double q = rng.uniform(0.1, 10.0);
        const double alpha = rng.uniform(1.0, 4.0);
        double d1 = rng.uniform(0.01, 1e4);
        double d2 = rng.uniform(0.01, 1e4);
        if (d1 > d2) std::swap(d1, d2);
        if (d1 == d2) continue;
        CHECK(received_power(q, d1, alpha) > received_power(q, d2, alpha));
    }
}
