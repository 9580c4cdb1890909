#include "flybs/channel_plan.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace flybs {

std::vector<int> ChannelPlan::user_channel_pool(int b, int num_flybs) const {
    if (b == num_flybs) return direct_gbs;
    if (b == num_flybs - 1) return direct_relay;
    // Access FlyBSs may use the whole band; each starts its ascending scan
    // at a per-BS offset so lightly loaded neighbours occupy different
    // channel ranges.
    std::vector<int> all(num_channels);
    const int offset = num_access() > 0 ? b * (num_channels / num_access()) : 0;
    for (int c = 0; c < num_channels; ++c) all[c] = (offset + c) % num_channels;
    return all;
}

int ChannelPlan::association_capacity(int b, int num_flybs) const {
    if (b == num_flybs) return static_cast<int>(direct_gbs.size());
    if (b == num_flybs - 1) return static_cast<int>(direct_relay.size());
    return num_channels;
}

ChannelPlan make_channel_plan(int num_channels, double total_bandwidth_hz,
                              double direct_fraction, int num_flybs) {
    if (num_channels <= 0) throw std::invalid_argument("make_channel_plan: num_channels <= 0");
    if (num_flybs < 2) throw std::invalid_argument("make_channel_plan: need a relay plus at least one access FlyBS");
    if (direct_fraction < 0.0 || direct_fraction >= 1.0)
        throw std::invalid_argument("make_channel_plan: direct_fraction outside [0,1)");

    ChannelPlan plan;
    plan.num_channels = num_channels;
    plan.bandwidths = Eigen::VectorXd::Constant(num_channels, total_bandwidth_hz / num_channels);

    // Direct-serving sets sit at the top of the band, GBS above relay, so
    // that access FlyBSs (which fill channels from 0 upward) rarely collide
    // with the relay's and GBS's own users.
    const int n_direct = static_cast<int>(direct_fraction * num_channels);
    const int gbs_base = num_channels - n_direct;
    // The relay and GBS share the top block for their own users (distinct,
    // usually well-separated transmitters may reuse channels), keeping the
    // whole lower band free for backhaul.
    for (int c = 0; c < n_direct; ++c) {
        plan.direct_gbs.push_back(gbs_base + c);
        plan.direct_relay.push_back(gbs_base + c);
    }
    for (int c = 0; c < gbs_base; ++c) plan.gbs_relay.push_back(c);

    // Backhaul pool = everything outside the relay's direct set, split
    // equally; leftover channels go to the lowest-indexed access FlyBSs.
    const int n_access = num_flybs - 1;
    const int per = gbs_base / n_access;
    const int extra = gbs_base % n_access;
    plan.backhaul.resize(n_access);
    int next = 0;
    for (int m = 0; m < n_access; ++m) {
        const int take = per + (m < extra ? 1 : 0);
        for (int i = 0; i < take; ++i) plan.backhaul[m].push_back(next++);
    }
    return plan;
}

std::string validate_channel_plan(const ChannelPlan& plan) {
    if (plan.num_channels <= 0) return "num_channels must be positive";
    if (plan.bandwidths.size() != plan.num_channels) return "bandwidths size mismatch";
    for (int c = 0; c < plan.num_channels; ++c)
        if (!(plan.bandwidths[c] > 0.0)) return "bandwidths must be positive";

    auto in_range = [&](const std::vector<int>& v) {
        return std::all_of(v.begin(), v.end(),
                           [&](int c) { return c >= 0 && c < plan.num_channels; });
    };
    if (!in_range(plan.direct_relay) || !in_range(plan.direct_gbs) || !in_range(plan.gbs_relay))
        return "channel index out of range";

    std::set<int> backhaul_union;
    for (const auto& set : plan.backhaul) {
        if (!in_range(set)) return "backhaul channel index out of range";
        for (int c : set)
            if (!backhaul_union.insert(c).second) return "backhaul sets are not pairwise disjoint";
    }
    for (int c : plan.direct_relay)
        if (backhaul_union.count(c)) return "relay user channels overlap a backhaul set";
    return {};
}

}  // namespace flybs
