#pragma once

#include "flybs/types.hpp"

#include <vector>

namespace flybs {

// Circular user area. Users assigned to an area never leave it (steps
// reflect at the boundary).
struct AreaSpec {
    Vec3 center = Vec3::Zero();  // z = 0, users move on the ground
    double radius = 0.0;
    double user_fraction = 0.0;
};

// One class of crowd clusters instantiated `count` times per area.
struct ClusterSpec {
    double center_speed = 0.0;        // m/s
    double member_speed_min = 0.0;    // m/s relative to the cluster center
    double member_speed_max = 0.0;
    int count = 0;
};

struct MobilitySpec {
    std::vector<AreaSpec> areas;
    double walker_fraction = 0.5;
    double walker_speed = 1.0;  // m/s
    std::vector<ClusterSpec> clusters;  // instantiated per area
    double step_delta = 1.0;    // s
};

struct ClusterState {
    int area = 0;
    double speed = 0.0;
    double member_speed_min = 0.0;
    double member_speed_max = 0.0;
    Vec3 center = Vec3::Zero();
    double heading = 0.0;  // radians
};

enum class UserMotionKind { Walker, ClusterMember };

struct UserMotion {
    int area = 0;
    UserMotionKind kind = UserMotionKind::Walker;
    int cluster = -1;  // index into MobilityState::clusters for members
};

struct MobilityState {
    std::vector<Vec3> positions;
    std::vector<UserMotion> motions;
    std::vector<ClusterState> clusters;
};

// Places n users uniformly inside their areas (fractions rounded to exact
// counts), tags them walker or cluster member, and seeds cluster centers
// and headings. Deterministic for a given stream state.
MobilityState initialize_users(const MobilitySpec& spec, int n, RandomStream& rng);

// Advances one time step: cluster centers move along their headings,
// walkers take random-direction steps, members add a random relative step
// to their cluster's displacement. All users reflect at their area border
// (headings are redrawn when a cluster reflects).
void step_users(MobilityState& ms, const MobilitySpec& spec, RandomStream& rng);

// Fastest possible ground speed of the given user (used by displacement
// audits): walker speed, or cluster center speed plus maximum relative
// member speed.
double max_user_speed(const MobilityState& ms, const MobilitySpec& spec, int n);

}  // namespace flybs
