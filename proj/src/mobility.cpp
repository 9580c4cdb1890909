#include "flybs/mobility.hpp"

#include <cmath>
#include <stdexcept>

namespace flybs {
namespace {

// Radial fold back into the circle; never increases the displacement from
// an interior starting point.
Vec3 reflect_into_area(const AreaSpec& area, Vec3 p) {
    const Vec3 rel = p - area.center;
    const double r = rel.norm();
    if (r <= area.radius || r < 1e-12) return p;
    return area.center + rel * ((2.0 * area.radius - r) / r);
}

Vec3 heading_step(double heading, double length) {
    return {length * std::cos(heading), length * std::sin(heading), 0.0};
}

}  // namespace

MobilityState initialize_users(const MobilitySpec& spec, int n, RandomStream& rng) {
    if (n <= 0) throw std::invalid_argument("initialize_users: n must be positive");
    if (spec.areas.empty()) throw std::invalid_argument("initialize_users: no areas");

    MobilityState ms;
    ms.positions.resize(n);
    ms.motions.resize(n);

    // Exact per-area counts via cumulative rounding.
    std::vector<int> area_count(spec.areas.size());
    double cum = 0.0;
    int assigned = 0;
    for (size_t a = 0; a < spec.areas.size(); ++a) {
        cum += spec.areas[a].user_fraction;
        const int upto = (a + 1 == spec.areas.size())
                             ? n
                             : static_cast<int>(std::lround(cum * n));
        area_count[a] = upto - assigned;
        assigned = upto;
    }

    for (size_t a = 0; a < spec.areas.size(); ++a)
        for (const ClusterSpec& cs : spec.clusters)
            for (int i = 0; i < cs.count; ++i) {
                ClusterState c;
                c.area = static_cast<int>(a);
                c.speed = cs.center_speed;
                c.member_speed_min = cs.member_speed_min;
                c.member_speed_max = cs.member_speed_max;
                c.center = spec.areas[a].center + rng.disk_point(spec.areas[a].radius);
                c.heading = rng.uniform(0.0, 2.0 * M_PI);
                ms.clusters.push_back(c);
            }

    int user = 0;
    for (size_t a = 0; a < spec.areas.size(); ++a) {
        const int total = area_count[a];
        const int walkers = static_cast<int>(std::lround(spec.walker_fraction * total));
        std::vector<int> area_clusters;
        for (size_t c = 0; c < ms.clusters.size(); ++c)
            if (ms.clusters[c].area == static_cast<int>(a)) area_clusters.push_back(static_cast<int>(c));

        for (int i = 0; i < total; ++i, ++user) {
            ms.positions[user] = spec.areas[a].center + rng.disk_point(spec.areas[a].radius);
            UserMotion& motion = ms.motions[user];
            motion.area = static_cast<int>(a);
            if (i < walkers || area_clusters.empty()) {
                motion.kind = UserMotionKind::Walker;
            } else {
                motion.kind = UserMotionKind::ClusterMember;
                motion.cluster = area_clusters[(i - walkers) % area_clusters.size()];
            }
        }
    }
    return ms;
}

void step_users(MobilityState& ms, const MobilitySpec& spec, RandomStream& rng) {
    const double delta = spec.step_delta;

    std::vector<Vec3> cluster_disp(ms.clusters.size(), Vec3::Zero());
    for (size_t c = 0; c < ms.clusters.size(); ++c) {
        ClusterState& cl = ms.clusters[c];
        const AreaSpec& area = spec.areas[cl.area];
        const Vec3 proposed = cl.center + heading_step(cl.heading, cl.speed * delta);
        Vec3 next = reflect_into_area(area, proposed);
        if ((next - proposed).norm() > 1e-12) cl.heading = rng.uniform(0.0, 2.0 * M_PI);
        cluster_disp[c] = next - cl.center;
        cl.center = next;
    }

    for (size_t n = 0; n < ms.positions.size(); ++n) {
        const UserMotion& motion = ms.motions[n];
        const AreaSpec& area = spec.areas[motion.area];
        Vec3 proposed;
        if (motion.kind == UserMotionKind::Walker) {
            const double heading = rng.uniform(0.0, 2.0 * M_PI);
            proposed = ms.positions[n] + heading_step(heading, spec.walker_speed * delta);
        } else {
            const ClusterState& cl = ms.clusters[motion.cluster];
            const double speed = rng.uniform(cl.member_speed_min, cl.member_speed_max);
            const double heading = rng.uniform(0.0, 2.0 * M_PI);
            proposed = ms.positions[n] + cluster_disp[motion.cluster] +
                       heading_step(heading, speed * delta);
        }
        ms.positions[n] = reflect_into_area(area, proposed);
    }
}

double max_user_speed(const MobilityState& ms, const MobilitySpec& spec, int n) {
    const UserMotion& motion = ms.motions[n];
    if (motion.kind == UserMotionKind::Walker) return spec.walker_speed;
    const ClusterState& cl = ms.clusters[motion.cluster];
    return cl.speed + cl.member_speed_max;
}

}  // namespace flybs
