#include "flybs/engine.hpp"

#include "flybs/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace flybs {
namespace {

constexpr double kAuditSpeedSlack = 1e-6;  // meters, geometric tolerance of extremal_point

void fnv_mix(std::uint64_t& h, const void* data, size_t bytes) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

// Deterministic Lloyd clustering with farthest-point seeding; used only to
// pick sensible initial FlyBS positions.
std::vector<Vec3> kmeans_xy(const std::vector<Vec3>& points, int k, int iterations) {
    std::vector<Vec3> centers;
    if (points.empty() || k <= 0) return centers;
    k = std::min<int>(k, static_cast<int>(points.size()));

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());

    size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < points.size(); ++i) {
        const double d = (points[i] - centroid).squaredNorm();
        if (d < best) {
            best = d;
            first = i;
        }
    }
    centers.push_back(points[first]);
    while (static_cast<int>(centers.size()) < k) {
        size_t far = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const Vec3& c : centers) nearest = std::min(nearest, (points[i] - c).squaredNorm());
            if (nearest > far_d) {
                far_d = nearest;
                far = i;
            }
        }
        centers.push_back(points[far]);
    }

    std::vector<int> owner(points.size(), 0);
    for (int it = 0; it < iterations; ++it) {
        for (size_t i = 0; i < points.size(); ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (size_t c = 0; c < centers.size(); ++c) {
                const double d = (points[i] - centers[c]).squaredNorm();
                if (d < nearest) {
                    nearest = d;
                    owner[i] = static_cast<int>(c);
                }
            }
        }
        for (size_t c = 0; c < centers.size(); ++c) {
            Vec3 sum = Vec3::Zero();
            int count = 0;
            for (size_t i = 0; i < points.size(); ++i)
                if (owner[i] == static_cast<int>(c)) {
                    sum += points[i];
                    ++count;
                }
            if (count > 0) centers[c] = sum / count;
        }
    }
    return centers;
}

}  // namespace

std::string flag_names(unsigned flags) {
    std::string out;
    auto add = [&out](const char* name) {
        if (!out.empty()) out += ';';
        out += name;
    };
    if (flags & kFlagBackhaulLimited) add("backhaul_limited");
    if (flags & kFlagMaxItersHit) add("max_iters_hit");
    if (flags & kFlagRegionEmpty) add("region_empty");
    return out;
}

Simulation::Simulation(const Scenario& sc, const std::vector<Vec3>* initial_users)
    : scenario_(sc), plan_(scenario_channel_plan(sc)), rng_(sc.seed) {
    validate_scenario(scenario_);

    mobility_ = initialize_users(scenario_.mobility, scenario_.n_users, rng_);
    if (initial_users) {
        if (initial_users->size() != mobility_.positions.size())
            throw std::invalid_argument("Simulation: initial user positions size mismatch");
        mobility_.positions = *initial_users;
    }
    state_.user_positions = mobility_.positions;
    state_.radio = scenario_radio_context(scenario_);
    state_.serving = Eigen::VectorXi::Constant(scenario_.n_users, -1);
    state_.user_channel = Eigen::VectorXi::Constant(scenario_.n_users, -1);

    place_initial_flybss();

    vmax_.assign(scenario_.m_flybss + 1, scenario_.flight.vmax);
    vmax_.back() = 0.0;  // GBS
    if (scenario_.scheme == Scheme::TwoHop) {
        // The relay becomes a ground BS co-located with the GBS: it still
        // hubs the access backhaul but never moves, and its own feeder link
        // is treated as unconstrained.
        const int relay = state_.relay_index();
        state_.bs_positions[relay] = scenario_.gbs_position + Vec3(0.0, 0.0, 5.0);
        vmax_[relay] = 0.0;
        relay_link_constrained_ = false;
        relay_is_ground_ = true;
    } else if (scenario_.scheme == Scheme::Static) {
        for (int m = 0; m < scenario_.m_flybss; ++m) vmax_[m] = 0.0;
    }

    refresh_channel_usage(state_, plan_);
    const AssociationProblem problem = build_utilities(state_, plan_);
    state_.serving = solve_association(problem);
    state_.user_channel = assign_channels(state_.serving, plan_, state_.num_flybs());
    refresh_channel_usage(state_, plan_);
}

void Simulation::place_initial_flybss() {
    const int m_total = scenario_.m_flybss;
    const double mid_alt = std::clamp(200.0, scenario_.flight.h_min, scenario_.flight.h_max);
    state_.bs_positions.assign(m_total + 1, Vec3::Zero());
    state_.bs_positions[m_total] = scenario_.gbs_position;

    // Access FlyBSs start above the hot spots of the users they can
    // actually win: the GBS keeps its channel budget's worth of nearest
    // users, the rest are clustered. The relay starts halfway between the
    // GBS and the area farthest from it.
    std::vector<Vec3> contested = state_.user_positions;
    const size_t gbs_keep = std::min(contested.size(),
                                     static_cast<size_t>(plan_.direct_gbs.size()));
    std::sort(contested.begin(), contested.end(), [&](const Vec3& a, const Vec3& b) {
        return (a - scenario_.gbs_position).squaredNorm() <
               (b - scenario_.gbs_position).squaredNorm();
    });
    contested.erase(contested.begin(), contested.begin() + gbs_keep);
    if (contested.empty()) contested = state_.user_positions;

    // Allocate the access FlyBSs across the mobility areas in proportion to
    // the contested-user mass (largest remainder), then cluster within each
    // area. A crowd bigger than one FlyBS's channel budget gets several.
    const size_t n_areas = scenario_.mobility.areas.size();
    std::vector<std::vector<Vec3>> by_area(n_areas);
    for (const Vec3& u : contested) {
        size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < n_areas; ++a) {
            const double d = (u - scenario_.mobility.areas[a].center).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = a;
            }
        }
        by_area[best].push_back(u);
    }
    // An area saturates once its contested users fit into the allocated
    // FlyBSs' channel budgets; extra FlyBSs go where users remain unserved.
    const int n_access = m_total - 1;
    const int cap = std::max(1, plan_.num_channels);
    std::vector<int> quota(n_areas, 0), need(n_areas, 0);
    std::vector<std::pair<double, size_t>> remainder;
    int assigned = 0;
    for (size_t a = 0; a < n_areas; ++a) {
        const int users = static_cast<int>(by_area[a].size());
        need[a] = (users + cap - 1) / cap;
        const double share =
            static_cast<double>(n_access) * users / contested.size();
        quota[a] = std::min(static_cast<int>(share), need[a]);
        assigned += quota[a];
        remainder.emplace_back(share - quota[a], a);
    }
    std::sort(remainder.begin(), remainder.end(), std::greater<>());
    for (const auto& [frac, a] : remainder) {
        if (assigned >= n_access) break;
        if (quota[a] < need[a]) {
            ++quota[a];
            ++assigned;
        }
    }
    while (assigned < n_access) {  // every area saturated: spread by user mass
        size_t best = 0;
        double best_score = -1.0;
        for (size_t a = 0; a < n_areas; ++a) {
            if (quota[a] >= static_cast<int>(by_area[a].size())) continue;
            const double score = static_cast<double>(by_area[a].size()) / (quota[a] + 1);
            if (score > best_score) {
                best_score = score;
                best = a;
            }
        }
        if (best_score < 0.0) break;
        ++quota[best];
        ++assigned;
    }

    std::vector<Vec3> centers;
    for (size_t a = 0; a < n_areas; ++a) {
        const std::vector<Vec3> local = kmeans_xy(by_area[a], quota[a], 20);
        centers.insert(centers.end(), local.begin(), local.end());
    }
    for (int m = 0; m < n_access; ++m) {
        Vec3 p = centers.empty()
                     ? scenario_.mobility.areas[m % n_areas].center
                     : centers[m % centers.size()];
        p.z() = mid_alt;
        state_.bs_positions[m] = p;
    }

    Vec3 far_center = scenario_.mobility.areas.front().center;
    double far_d = -1.0;
    for (const AreaSpec& a : scenario_.mobility.areas) {
        const double d = (a.center - scenario_.gbs_position).head<2>().norm();
        if (d > far_d) {
            far_d = d;
            far_center = a.center;
        }
    }
    Vec3 relay = 0.5 * (scenario_.gbs_position + far_center);
    relay.z() = mid_alt;
    state_.bs_positions[m_total - 1] = relay;
}

Vec3 Simulation::position_flybs(int m, const std::vector<Vec3>& starts,
                                const NetworkState& anchor, const RadialTerm& term,
                                unsigned& flags) {
    const int relay = state_.relay_index();
    const double delta = scenario_.delta;
    const Slab slab{scenario_.flight.h_min, scenario_.flight.h_max};
    const Ball speed_ball{starts[m], vmax_[m] * delta};

    if (vmax_[m] <= 0.0) return starts[m];

    const double lhs = access_load_upper_bound(anchor, plan_, m, vmax_, delta);
    const DistanceBounds bracket =
        distance_bounds_bs_pair(starts[m], starts[relay], vmax_[m], vmax_[relay], delta);
    const auto radius = bisect_capacity_radius(
        lhs,
        [&](double d) { return access_backhaul_lower_bound(anchor, plan_, m, d, vmax_, delta); },
        bracket, scenario_.solver.bisect_tol_m);

    // The returned radius bounds the realized end-of-step distance to the
    // relay; shrink it by the relay's own reach so any later relay move
    // keeps the surrogate satisfied.
    const double ball_radius = radius ? *radius - vmax_[relay] * delta : -1.0;
    if (radius && ball_radius >= 0.0) {
        FeasibilityRegion region{slab, {speed_ball, Ball{starts[relay], ball_radius}}};
        if (!term.degenerate && term.rho != 0.0) {
            const ExtremalSense sense =
                term.rho > 0.0 ? ExtremalSense::Closest : ExtremalSense::Furthest;
            if (const auto p = extremal_point(region, term.attractor, sense)) return *p;
        } else if (region_contains(region, starts[m], scenario_.solver.geom_tol_m)) {
            return starts[m];  // hold position, already feasible
        } else if (const auto p = extremal_point(region, starts[m], ExtremalSense::Closest)) {
            return *p;
        }
    }

    // Surrogate unsatisfiable (or backhaul ball unreachable): close in on
    // the relay as far as the slab and speed ball allow.
    FeasibilityRegion fallback{slab, {speed_ball}};
    if (const auto p = extremal_point(fallback, starts[relay], ExtremalSense::Closest)) {
        flags |= kFlagBackhaulLimited;
        return *p;
    }
    flags |= kFlagRegionEmpty;
    return starts[m];
}

Vec3 Simulation::position_relay(const std::vector<Vec3>& starts, const NetworkState& anchor,
                                const RadialTerm& term, unsigned& flags) {
    const int relay = state_.relay_index();
    const double delta = scenario_.delta;
    const Slab slab{scenario_.flight.h_min, scenario_.flight.h_max};
    const Ball speed_ball{starts[relay], vmax_[relay] * delta};
    const Vec3 gbs = state_.bs_positions[state_.gbs_index()];

    if (vmax_[relay] <= 0.0) return starts[relay];

    std::optional<double> radius;
    if (relay_link_constrained_) {
        const double lhs = relay_load_upper_bound(anchor, plan_, vmax_, delta);
        const DistanceBounds bracket =
            distance_bounds_bs_pair(starts[relay], gbs, vmax_[relay], 0.0, delta);
        radius = bisect_capacity_radius(
            lhs,
            [&](double d) { return relay_backhaul_lower_bound(anchor, plan_, d, vmax_, delta); },
            bracket, scenario_.solver.bisect_tol_m);
    }

    FeasibilityRegion region{slab, {speed_ball}};
    if (relay_link_constrained_) {
        if (!radius) {
            // Even the closest approach to the GBS cannot carry the load.
            if (const auto p = extremal_point(region, gbs, ExtremalSense::Closest)) {
                flags |= kFlagBackhaulLimited;
                return *p;
            }
            flags |= kFlagRegionEmpty;
            return starts[relay];
        }
        region.balls.push_back(Ball{gbs, *radius});
    }

    if (!term.degenerate && term.rho != 0.0) {
        const ExtremalSense sense = term.rho > 0.0 ? ExtremalSense::Closest : ExtremalSense::Furthest;
        if (const auto p = extremal_point(region, term.attractor, sense)) return *p;
    } else if (region_contains(region, starts[relay], scenario_.solver.geom_tol_m)) {
        return starts[relay];
    } else if (const auto p = extremal_point(region, starts[relay], ExtremalSense::Closest)) {
        return *p;
    }

    FeasibilityRegion fallback{slab, {speed_ball}};
    if (const auto p = extremal_point(fallback, gbs, ExtremalSense::Closest)) {
        flags |= kFlagBackhaulLimited;
        return *p;
    }
    flags |= kFlagRegionEmpty;
    return starts[relay];
}

void Simulation::set_user_positions(const std::vector<Vec3>& positions) {
    if (positions.size() != mobility_.positions.size())
        throw std::invalid_argument("set_user_positions: size mismatch");
    mobility_.positions = positions;
    state_.user_positions = positions;
}

StepReport Simulation::step() {
    step_users(mobility_, scenario_.mobility, rng_);
    return advance(mobility_.positions);
}

StepReport Simulation::step(const std::vector<Vec3>& forced_user_positions) {
    if (forced_user_positions.size() != mobility_.positions.size())
        throw std::invalid_argument("step: forced user positions size mismatch");
    mobility_.positions = forced_user_positions;
    return advance(forced_user_positions);
}

StepReport Simulation::advance(const std::vector<Vec3>& user_positions) {
    const int m_total = scenario_.m_flybss;
    const int relay = state_.relay_index();

    state_.user_positions = user_positions;
    for (const Vec3& p : state_.user_positions) fnv_mix(checksum_, p.data(), 3 * sizeof(double));

    const std::vector<Vec3> starts = state_.bs_positions;

    StepReport report;
    report.time_step = steps_done_ + 1;
    unsigned flags = 0;
    bool converged = false;

    for (int iter = 0; iter < scenario_.solver.max_inner_iters; ++iter) {
        report.inner_iterations = iter + 1;

        NetworkState anchor = state_;
        anchor.bs_positions = starts;

        RadialObjective radial =
            build_radial(linearize_capacity(state_, plan_, scenario_.solver.approx_mode), state_);

        std::vector<Vec3> next(m_total);
        for (int m = 0; m < m_total - 1; ++m) {
            if (scenario_.solver.sequential_updates && m > 0)
                radial = build_radial(
                    linearize_capacity(state_, plan_, scenario_.solver.approx_mode), state_);
            next[m] = position_flybs(m, starts, anchor, radial.per_flybs[m], flags);
            if (scenario_.solver.sequential_updates) state_.bs_positions[m] = next[m];
        }
        for (int m = 0; m < m_total - 1; ++m) state_.bs_positions[m] = next[m];

        if (scenario_.solver.sequential_updates)
            radial = build_radial(
                linearize_capacity(state_, plan_, scenario_.solver.approx_mode), state_);
        state_.bs_positions[relay] =
            position_relay(starts, anchor, radial.per_flybs[relay], flags);

        const AssociationProblem problem = build_utilities(state_, plan_);
        const Eigen::VectorXi serving = solve_association(problem);
        if (serving == state_.serving) {
            converged = true;
            break;
        }
        state_.serving = serving;
        state_.user_channel = assign_channels(serving, plan_, state_.num_flybs());
        refresh_channel_usage(state_, plan_);
    }
    if (!converged) flags |= kFlagMaxItersHit;
    report.flags = flags;

    ++steps_done_;
    state_.time_step = steps_done_;

    audit(starts, report);
    return report;
}

void Simulation::audit(const std::vector<Vec3>& starts, StepReport& report) {
    const int m_total = scenario_.m_flybss;
    const int relay = state_.relay_index();

    report.sum_capacity = sum_capacity(state_, plan_);
    report.mean_user_capacity = report.sum_capacity / scenario_.n_users;
    report.per_bs_load.assign(m_total + 1, 0);
    for (int n = 0; n < scenario_.n_users; ++n)
        if (state_.serving[n] >= 0) {
            ++report.per_bs_load[state_.serving[n]];
            ++report.associated_users;
        }

    for (int m = 0; m < m_total; ++m) {
        if (m == relay && relay_is_ground_) continue;
        const double z = state_.bs_positions[m].z();
        if (z < scenario_.flight.h_min - kAuditSpeedSlack ||
            z > scenario_.flight.h_max + kAuditSpeedSlack)
            ++report.altitude_violations;
        const double moved = (state_.bs_positions[m] - starts[m]).norm();
        if (moved > vmax_[m] * scenario_.delta + kAuditSpeedSlack) ++report.speed_violations;
    }
    for (int b = 0; b <= m_total; ++b)
        if (report.per_bs_load[b] > plan_.association_capacity(b, m_total))
            ++report.association_violations;

    report.access_backhaul_margin.resize(m_total - 1);
    double relay_total = 0.0;
    for (int m = 0; m < m_total - 1; ++m) {
        const double backhaul = relay_flybs_capacity(state_, plan_, m);
        relay_total += backhaul;
        report.access_backhaul_margin[m] = backhaul - access_load(state_, plan_, m);
    }
    report.gbs_backhaul_margin =
        relay_link_constrained_ ? gbs_relay_capacity(state_, plan_) - relay_total
                                : std::numeric_limits<double>::infinity();

    report.backhaul_satisfied = report.gbs_backhaul_margin >= -1e-6;
    for (const double margin : report.access_backhaul_margin)
        if (margin < -1e-6) report.backhaul_satisfied = false;
}

RunResult run_simulation(const Scenario& sc) {
    Simulation sim(sc);
    RunResult result;
    result.reports.reserve(sc.horizon);
    for (int k = 0; k < sc.horizon; ++k) result.reports.push_back(sim.step());
    result.trajectory_checksum = sim.trajectory_checksum();
    if (!result.reports.empty()) {
        for (const StepReport& r : result.reports) {
            result.time_avg_sum_capacity += r.sum_capacity;
            result.time_avg_user_capacity += r.mean_user_capacity;
        }
        result.time_avg_sum_capacity /= static_cast<double>(result.reports.size());
        result.time_avg_user_capacity /= static_cast<double>(result.reports.size());
    }
    return result;
}

}  // namespace flybs
