#pragma once

#include "flybs/types.hpp"

#include <optional>
#include <vector>

namespace flybs {

// Horizontal altitude band z_min <= z <= z_max.
struct Slab {
    double z_min = 0.0;
    double z_max = 0.0;
};

struct Ball {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
};

// Intersection of an altitude slab with up to two balls (speed ball and
// backhaul ball). May be empty; emptiness is detectable.
struct FeasibilityRegion {
    Slab slab;
    std::vector<Ball> balls;
};

enum class ExtremalSense { Closest, Furthest };

bool region_contains(const FeasibilityRegion& region, const Vec3& p, double tol = 1e-6);

bool region_empty(const FeasibilityRegion& region);

// Closest or furthest point of the region with respect to q0. Candidates
// are enumerated over all active constraint subsets (interior, spheres,
// slab planes, sphere/sphere and sphere/plane circles, triple intersection
// points) and polished with a short projected refinement pass. Returns
// nullopt when the region is empty. Furthest-sense queries require at
// least one ball (otherwise the region is unbounded).
std::optional<Vec3> extremal_point(const FeasibilityRegion& region, const Vec3& q0,
                                   ExtremalSense sense);

}  // namespace flybs
