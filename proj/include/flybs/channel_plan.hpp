#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace flybs {

// Partition of the radio band. Channels are indexed 0..num_channels-1.
//   direct_relay   - channels the relay uses to serve users directly
//   direct_gbs     - channels the GBS uses to serve users directly
//   backhaul[m]    - channels carrying relay -> m-th access FlyBS traffic
//   gbs_relay      - channels carrying GBS -> relay traffic (all but direct_gbs)
// Access FlyBSs may serve users on any channel (reuse across BSs is allowed);
// the relay keeps its user channels orthogonal to every backhaul set.
struct ChannelPlan {
    int num_channels = 0;
    Eigen::VectorXd bandwidths;  // Hz per channel
    std::vector<int> direct_relay;
    std::vector<int> direct_gbs;
    std::vector<std::vector<int>> backhaul;
    std::vector<int> gbs_relay;

    int num_access() const { return static_cast<int>(backhaul.size()); }

    // Channels BS b may allocate to its own users. b indexes 0..M with
    // access FlyBSs first, then relay (b == M-1), then GBS (b == M).
    std::vector<int> user_channel_pool(int b, int num_flybs) const;

    // Per-BS association capacity: C for access FlyBSs, |direct_relay| for
    // the relay, |direct_gbs| for the GBS.
    int association_capacity(int b, int num_flybs) const;
};

// Equal-bandwidth plan following the default scenario split: a
// direct_fraction share of channels (floored) serves users from the relay
// and from the GBS, the remainder is backhaul, divided equally among the
// access FlyBSs with leftovers going to the lowest-indexed ones.
ChannelPlan make_channel_plan(int num_channels, double total_bandwidth_hz,
                              double direct_fraction, int num_flybs);

// Returns an empty string when the plan invariants hold, else a description
// of the first violation found.
std::string validate_channel_plan(const ChannelPlan& plan);

}  // namespace flybs
