#pragma once

#include "flybs/channel_plan.hpp"
#include "flybs/state.hpp"

namespace flybs {

// Rebuilds s.channel_usage from the associations, channel assignments and
// backhaul plan in force.
void refresh_channel_usage(NetworkState& s, const ChannelPlan& plan);

// Whether BS b currently transmits on channel c (via the usage table when
// populated, else derived on the fly).
bool bs_uses_channel(const NetworkState& s, const ChannelPlan& plan, int b, int c);

// Received power at user n from BS b, with the distance floored at
// kMinLinkDistance. Expected-fading power coefficient (transmit power times
// unit reference gain).
double user_link_power(const NetworkState& s, int n, int b);

// Received power at BS rx of BS tx's user-serving transmissions (BS-to-BS
// pathloss exponent, sector-beam gain).
double bs_link_power(const NetworkState& s, int rx, int tx);

// Boresight received power of the directional backhaul beam from tx at rx.
double backhaul_link_power(const NetworkState& s, int rx, int tx);

// Downlink capacity of user n served by BS b on the user's assigned channel.
// Interference is the sum of received powers from every non-serving BS
// (Full mode) or from BSs actively transmitting on the user's channel
// (SameChannel mode).
double user_capacity(const NetworkState& s, const ChannelPlan& plan, int n, int b);

// Hypothetical capacity of user n if it were served by BS b; the bandwidth
// is that of the lowest-indexed channel in b's user pool.
double user_capacity_if_served(const NetworkState& s, const ChannelPlan& plan, int n, int b);

// Capacity of the relay -> m-th access FlyBS backhaul link, summed over the
// channels reserved for that FlyBS. Interferers are every BS other than the
// relay and the receiving FlyBS.
double relay_flybs_capacity(const NetworkState& s, const ChannelPlan& plan, int m_access);

// Capacity of the GBS -> relay backhaul link over all non-direct GBS
// channels. Interferers are the access FlyBSs.
double gbs_relay_capacity(const NetworkState& s, const ChannelPlan& plan);

// Sum of user_capacity over all associated users.
double sum_capacity(const NetworkState& s, const ChannelPlan& plan);

// Aggregate downlink capacity of the users served by BS b (left-hand side
// of the per-FlyBS backhaul constraint when b is an access FlyBS).
double access_load(const NetworkState& s, const ChannelPlan& plan, int b);

}  // namespace flybs
