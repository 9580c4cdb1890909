#pragma once

#include "flybs/association.hpp"
#include "flybs/feasibility.hpp"
#include "flybs/mobility.hpp"
#include "flybs/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flybs {

enum StepFlag : unsigned {
    kFlagBackhaulLimited = 1u << 0,  // a bisection reported Infeasible (or the
                                     // backhaul ball was unreachable); the FlyBS
                                     // moved as close to its hub as it could
    kFlagMaxItersHit = 1u << 1,      // inner loop stopped before the association
                                     // reached a fixed point
    kFlagRegionEmpty = 1u << 2,      // slab + speed ball empty; FlyBS held position
};

std::string flag_names(unsigned flags);

struct StepReport {
    int time_step = 0;
    double sum_capacity = 0.0;        // bits/s
    double mean_user_capacity = 0.0;  // sum_capacity / N
    int associated_users = 0;
    std::vector<int> per_bs_load;                // users per BS, GBS last
    std::vector<double> access_backhaul_margin;  // true per-FlyBS backhaul slack, bits/s
    double gbs_backhaul_margin = 0.0;            // true GBS-link slack; +inf when unconstrained
    unsigned flags = 0;
    int inner_iterations = 0;
    // Constraint audit of the emitted state.
    int altitude_violations = 0;
    int speed_violations = 0;
    int association_violations = 0;
    bool backhaul_satisfied = true;  // true constraints hold (always expected
                                     // when flags == 0)
};

struct RunResult {
    std::vector<StepReport> reports;
    std::uint64_t trajectory_checksum = 0;
    double time_avg_sum_capacity = 0.0;
    double time_avg_user_capacity = 0.0;
};

// One simulated network with its optimizer. Each step() advances the users,
// then alternates FlyBS repositioning and user re-association until the
// association stops changing (or the iteration cap is hit).
class Simulation {
  public:
    // initial_users overrides the mobility model's initial placement
    // (trajectory replay); subsequent steps then come from step(positions).
    explicit Simulation(const Scenario& sc,
                        const std::vector<Vec3>* initial_users = nullptr);

    StepReport step();

    // Advances one step with externally supplied user positions instead of
    // the internal mobility draw (trajectory replay).
    StepReport step(const std::vector<Vec3>& forced_user_positions);

    // Replaces the current user locations (mobility continues from them);
    // trajectory replay and fixture construction hook.
    void set_user_positions(const std::vector<Vec3>& positions);

    const Scenario& scenario() const { return scenario_; }
    const NetworkState& state() const { return state_; }
    const ChannelPlan& plan() const { return plan_; }
    std::uint64_t trajectory_checksum() const { return checksum_; }

  private:
    StepReport advance(const std::vector<Vec3>& user_positions);
    void place_initial_flybss();
    Vec3 position_flybs(int m, const std::vector<Vec3>& starts, const NetworkState& anchor,
                        const RadialTerm& term, unsigned& flags);
    Vec3 position_relay(const std::vector<Vec3>& starts, const NetworkState& anchor,
                        const RadialTerm& term, unsigned& flags);
    void audit(const std::vector<Vec3>& starts, StepReport& report);

    Scenario scenario_;
    ChannelPlan plan_;
    NetworkState state_;
    MobilityState mobility_;
    RandomStream rng_;
    std::vector<double> vmax_;        // per BS, GBS last (0)
    bool relay_link_constrained_ = true;  // false for the two-hop scheme
    bool relay_is_ground_ = false;        // two-hop: relay pinned at the GBS site
    int steps_done_ = 0;
    std::uint64_t checksum_ = 1469598103934665603ULL;  // FNV-1a offset
};

RunResult run_simulation(const Scenario& sc);

}  // namespace flybs
