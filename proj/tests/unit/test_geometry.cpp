#include "flybs/geometry.hpp"

#include "flybs/types.hpp"

#include <doctest.h>

using namespace flybs;

namespace {

// Exhaustive grid scan over the region bounding box; the independent oracle
// for extremal-point queries.
struct GridBest {
    Vec3 closest = Vec3::Zero();
    Vec3 furthest = Vec3::Zero();
    double d_min = 0.0;
    double d_max = 0.0;
    bool any = false;
};

GridBest grid_oracle(const FeasibilityRegion& region, const Vec3& q0, double step) {
    REQUIRE(!region.balls.empty());
    Vec3 lo(-1e300, -1e300, region.slab.z_min);
    Vec3 hi(1e300, 1e300, region.slab.z_max);
    for (const Ball& b : region.balls)
        for (int axis = 0; axis < 3; ++axis) {
            lo[axis] = std::max(lo[axis], b.center[axis] - b.radius);
            hi[axis] = std::min(hi[axis], b.center[axis] + b.radius);
        }
    GridBest best;
    for (double x = lo.x(); x <= hi.x() + 1e-9; x += step)
        for (double y = lo.y(); y <= hi.y() + 1e-9; y += step)
            for (double z = lo.z(); z <= hi.z() + 1e-9; z += step) {
                const Vec3 p(x, y, z);
                if (!region_contains(region, p, 1e-9)) continue;
                const double d = (p - q0).norm();
                if (!best.any || d < best.d_min) {
                    best.d_min = d;
                    best.closest = p;
                }
                if (!best.any || d > best.d_max) {
                    best.d_max = d;
                    best.furthest = p;
                }
                best.any = true;
            }
    return best;
}

}  // namespace

TEST_CASE("interior query point is its own closest point") {
    FeasibilityRegion region{{-2.0, 2.0}, {Ball{Vec3::Zero(), 1.0}}};
    const Vec3 q0(0.2, 0, 0);
    const auto p = extremal_point(region, q0, ExtremalSense::Closest);
    REQUIRE(p.has_value());
    CHECK((*p - q0).norm() == doctest::Approx(0.0));
}

TEST_CASE("sphere projection and antipode for an exterior point") {
    FeasibilityRegion region{{-2.0, 2.0}, {Ball{Vec3::Zero(), 1.0}}};
    const Vec3 q0(3, 0, 0);
    const auto closest = extremal_point(region, q0, ExtremalSense::Closest);
    REQUIRE(closest.has_value());
    CHECK((*closest - Vec3(1, 0, 0)).norm() <= 1e-6);
    const auto furthest = extremal_point(region, q0, ExtremalSense::Furthest);
    REQUIRE(furthest.has_value());
    CHECK((*furthest - Vec3(-1, 0, 0)).norm() <= 1e-6);
}

TEST_CASE("slab clips the ball") {
    FeasibilityRegion region{{0.5, 2.0}, {Ball{Vec3::Zero(), 1.0}}};
    const auto closest = extremal_point(region, Vec3(0, 0, -3), ExtremalSense::Closest);
    REQUIRE(closest.has_value());
    CHECK(closest->z() == doctest::Approx(0.5));
    CHECK(region_contains(region, *closest, 1e-6));
}

TEST_CASE("empty regions are detected") {
    CHECK(region_empty({{1.0, -1.0}, {}}));
    CHECK(region_empty({{10.0, 20.0}, {Ball{Vec3::Zero(), 1.0}}}));
    CHECK(region_empty({{-5.0, 5.0}, {Ball{Vec3::Zero(), 1.0}, Ball{Vec3(10, 0, 0), 2.0}}}));
    CHECK_FALSE(region_empty({{-5.0, 5.0}, {Ball{Vec3::Zero(), 2.0}, Ball{Vec3(3, 0, 0), 2.0}}}));
    CHECK(extremal_point({{10.0, 20.0}, {Ball{Vec3::Zero(), 1.0}}}, Vec3::Zero(),
                         ExtremalSense::Closest) == std::nullopt);
}

TEST_CASE("zero-radius speed ball pins the point") {
    FeasibilityRegion region{{90.0, 310.0}, {Ball{Vec3(10, 20, 150), 0.0}}};
    const auto p = extremal_point(region, Vec3(500, 0, 0), ExtremalSense::Closest);
    REQUIRE(p.has_value());
    CHECK((*p - Vec3(10, 20, 150)).norm() <= 1e-9);
}

TEST_CASE("two-ball slab fixture matches the grid oracle") {
    FeasibilityRegion region{{100.0, 115.0},
                             {Ball{Vec3(0, 0, 105), 12.0}, Ball{Vec3(9, 4, 108), 10.0}}};
    const Vec3 q0(40, -25, 130);
    const GridBest oracle = grid_oracle(region, q0, 0.25);
    REQUIRE(oracle.any);

    const auto closest = extremal_point(region, q0, ExtremalSense::Closest);
    REQUIRE(closest.has_value());
    CHECK(region_contains(region, *closest, 1e-6));
    CHECK((*closest - q0).norm() <= oracle.d_min * (1.0 + 1e-3));
    CHECK((*closest - oracle.closest).norm() <= 0.5);

    const auto furthest = extremal_point(region, q0, ExtremalSense::Furthest);
    REQUIRE(furthest.has_value());
    CHECK(region_contains(region, *furthest, 1e-6));
    CHECK((*furthest - q0).norm() >= oracle.d_max * (1.0 - 1e-3));
    CHECK((*furthest - oracle.furthest).norm() <= 0.5);
}

TEST_CASE("randomized regions: optimal within tolerance of the grid oracle") {
    RandomStream rng(41);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const Vec3 seed(rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(95, 125));
        FeasibilityRegion region;
        region.slab = {seed.z() - rng.uniform(2, 10), seed.z() + rng.uniform(2, 10)};
        for (int b = 0; b < 2; ++b) {
            const double radius = rng.uniform(5, 11);
            const Vec3 center = seed + Vec3(rng.uniform(-0.5, 0.5) * radius,
                                            rng.uniform(-0.5, 0.5) * radius,
                                            rng.uniform(-0.5, 0.5) * radius);
            region.balls.push_back({center, radius});
        }
        REQUIRE(region_contains(region, seed, 1e-9));  // nonempty by construction
        const Vec3 q0 = seed + Vec3(rng.uniform(-40, 40), rng.uniform(-40, 40),
                                    rng.uniform(-30, 30));
        const GridBest oracle = grid_oracle(region, q0, 0.25);
        if (!oracle.any) continue;
        ++checked;

        const auto closest = extremal_point(region, q0, ExtremalSense::Closest);
        REQUIRE(closest.has_value());
        CHECK(region_contains(region, *closest, 1e-6));
        CHECK((*closest - q0).norm() <= oracle.d_min + 1e-3 * std::max(1.0, oracle.d_min));

        const auto furthest = extremal_point(region, q0, ExtremalSense::Furthest);
        REQUIRE(furthest.has_value());
        CHECK(region_contains(region, *furthest, 1e-6));
        CHECK((*furthest - q0).norm() >= oracle.d_max - 1e-3 * std::max(1.0, oracle.d_max));
    }
    CHECK(checked >= 8);
}
