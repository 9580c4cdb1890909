#include "flybs/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace flybs {
namespace {

Vec3 unit_or(const Vec3& v, const Vec3& fallback) {
    const double n = v.norm();
    return n > 1e-12 ? Vec3(v / n) : fallback;
}

Vec3 clamp_to_slab(const Slab& slab, Vec3 p) {
    p.z() = std::clamp(p.z(), slab.z_min, slab.z_max);
    return p;
}

struct Circle3 {
    Vec3 center;
    double radius = 0.0;
    Vec3 normal;
    bool valid = false;
};

Circle3 sphere_sphere_circle(const Ball& a, const Ball& b) {
    Circle3 c;
    const Vec3 diff = b.center - a.center;
    const double d = diff.norm();
    if (d < 1e-12) return c;                                    // concentric
    if (d > a.radius + b.radius + 1e-12) return c;              // separated
    if (d < std::abs(a.radius - b.radius) - 1e-12) return c;    // nested
    const double h = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    c.radius = std::sqrt(std::max(0.0, a.radius * a.radius - h * h));
    c.normal = diff / d;
    c.center = a.center + h * c.normal;
    c.valid = true;
    return c;
}

Circle3 sphere_plane_circle(const Ball& a, double z) {
    Circle3 c;
    const double dz = z - a.center.z();
    if (std::abs(dz) > a.radius + 1e-12) return c;
    c.radius = std::sqrt(std::max(0.0, a.radius * a.radius - dz * dz));
    c.normal = Vec3::UnitZ();
    c.center = Vec3(a.center.x(), a.center.y(), z);
    c.valid = true;
    return c;
}

// Nearest and furthest point of a circle from q0.
void circle_extremes(const Circle3& c, const Vec3& q0, std::vector<Vec3>& out) {
    const Vec3 w = q0 - c.center;
    Vec3 in_plane = w - w.dot(c.normal) * c.normal;
    Vec3 fallback = std::abs(c.normal.z()) < 0.9 ? Vec3::UnitZ().cross(c.normal)
                                                 : Vec3::UnitX().cross(c.normal);
    const Vec3 dir = unit_or(in_plane, unit_or(fallback, Vec3::UnitX()));
    out.push_back(c.center + c.radius * dir);
    out.push_back(c.center - c.radius * dir);
}

// Intersection of two coplanar circles (both with normal +z, same z).
void coplanar_circle_intersections(const Circle3& c1, const Circle3& c2, std::vector<Vec3>& out) {
    const Vec3 diff = c2.center - c1.center;
    const double d = diff.norm();
    if (d < 1e-12) return;
    if (d > c1.radius + c2.radius + 1e-12) return;
    if (d < std::abs(c1.radius - c2.radius) - 1e-12) return;
    const double h = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
    const double s = std::sqrt(std::max(0.0, c1.radius * c1.radius - h * h));
    const Vec3 u = diff / d;
    const Vec3 perp = Vec3::UnitZ().cross(u);
    const Vec3 mid = c1.center + h * u;
    out.push_back(mid + s * perp);
    out.push_back(mid - s * perp);
}

Vec3 project_to_region(const FeasibilityRegion& region, Vec3 p) {
    for (int iter = 0; iter < 200; ++iter) {
        p = clamp_to_slab(region.slab, p);
        bool moved = false;
        for (const Ball& b : region.balls) {
            const Vec3 diff = p - b.center;
            const double d = diff.norm();
            if (d > b.radius) {
                p = b.center + (d > 1e-12 ? Vec3(diff * (b.radius / d))
                                          : Vec3(b.radius, 0.0, 0.0));
                moved = true;
            }
        }
        if (!moved && region_contains(region, p, 1e-9)) return p;
    }
    return p;
}

std::vector<Vec3> enumerate_candidates(const FeasibilityRegion& region, const Vec3& q0) {
    std::vector<Vec3> cands;
    cands.push_back(clamp_to_slab(region.slab, q0));

    const auto& balls = region.balls;
    for (size_t i = 0; i < balls.size(); ++i) {
        const Vec3 u = unit_or(q0 - balls[i].center, Vec3::UnitX());
        cands.push_back(balls[i].center + balls[i].radius * u);
        cands.push_back(balls[i].center - balls[i].radius * u);
    }
    for (size_t i = 0; i < balls.size(); ++i)
        for (size_t j = i + 1; j < balls.size(); ++j) {
            const Circle3 c = sphere_sphere_circle(balls[i], balls[j]);
            if (c.valid) circle_extremes(c, q0, cands);
        }
    for (const double z : {region.slab.z_min, region.slab.z_max}) {
        std::vector<Circle3> plane_circles;
        for (const Ball& b : balls) {
            const Circle3 c = sphere_plane_circle(b, z);
            if (c.valid) {
                circle_extremes(c, q0, cands);
                plane_circles.push_back(c);
            }
        }
        for (size_t i = 0; i < plane_circles.size(); ++i)
            for (size_t j = i + 1; j < plane_circles.size(); ++j)
                coplanar_circle_intersections(plane_circles[i], plane_circles[j], cands);
    }
    return cands;
}

Vec3 refine(const FeasibilityRegion& region, const Vec3& q0, ExtremalSense sense, Vec3 best) {
    const bool closest = sense == ExtremalSense::Closest;
    double best_obj = (best - q0).norm();
    double step = 0.0;
    for (const Ball& b : region.balls) step = std::max(step, 0.25 * b.radius);
    if (step <= 0.0) step = 0.25;
    for (int iter = 0; iter < 50; ++iter) {
        Vec3 dir = closest ? Vec3(q0 - best) : Vec3(best - q0);
        dir = unit_or(dir, Vec3::UnitX());
        const Vec3 cand = project_to_region(region, best + step * dir);
        const double obj = (cand - q0).norm();
        const bool better = closest ? obj < best_obj - 1e-12 : obj > best_obj + 1e-12;
        if (better && region_contains(region, cand, 1e-6)) {
            best = cand;
            best_obj = obj;
        } else {
            step *= 0.5;
        }
    }
    return best;
}

// Candidate machinery without the emptiness pre-check; assumes nonempty.
std::optional<Vec3> extremal_enumerate(const FeasibilityRegion& region, const Vec3& q0,
                                       ExtremalSense sense) {
    if (sense == ExtremalSense::Closest && region_contains(region, q0, 1e-9)) return q0;

    std::vector<Vec3> cands = enumerate_candidates(region, q0);
    // Belt and braces against enumeration gaps: a projected point from q0
    // and from each ball center is always feasible when the region is not
    // empty (alternating projections).
    cands.push_back(project_to_region(region, q0));
    for (const Ball& b : region.balls) cands.push_back(project_to_region(region, b.center));

    const bool closest = sense == ExtremalSense::Closest;
    bool found = false;
    Vec3 best = Vec3::Zero();
    double best_obj = 0.0;
    for (const Vec3& p : cands) {
        if (!region_contains(region, p, 1e-6)) continue;
        const double obj = (p - q0).norm();
        if (!found || (closest ? obj < best_obj : obj > best_obj)) {
            found = true;
            best = p;
            best_obj = obj;
        }
    }
    if (!found) return std::nullopt;
    return refine(region, q0, sense, best);
}

}  // namespace

bool region_contains(const FeasibilityRegion& region, const Vec3& p, double tol) {
    if (p.z() < region.slab.z_min - tol || p.z() > region.slab.z_max + tol) return false;
    for (const Ball& b : region.balls)
        if ((p - b.center).norm() > b.radius + tol) return false;
    return true;
}

bool region_empty(const FeasibilityRegion& region) {
    if (region.slab.z_min > region.slab.z_max) return true;
    for (const Ball& b : region.balls) {
        const double dz = std::clamp(b.center.z(), region.slab.z_min, region.slab.z_max) -
                          b.center.z();
        if (std::abs(dz) > b.radius + 1e-12) return true;
    }
    if (region.balls.size() >= 2) {
        // The full region is nonempty iff the closest point of slab+ball[0]
        // to ball[1]'s center lies within ball[1] (and so on pairwise for
        // completeness, though two balls is the practical maximum).
        for (size_t j = 1; j < region.balls.size(); ++j) {
            FeasibilityRegion sub{region.slab, {region.balls[0]}};
            const auto p = extremal_enumerate(sub, region.balls[j].center, ExtremalSense::Closest);
            if (!p) return true;
            if ((*p - region.balls[j].center).norm() > region.balls[j].radius + 1e-9) return true;
        }
    }
    return false;
}

std::optional<Vec3> extremal_point(const FeasibilityRegion& region, const Vec3& q0,
                                   ExtremalSense sense) {
    if (sense == ExtremalSense::Furthest && region.balls.empty())
        throw std::invalid_argument("extremal_point: furthest query on an unbounded region");
    if (region_empty(region)) return std::nullopt;
    return extremal_enumerate(region, q0, sense);
}

}  // namespace flybs
