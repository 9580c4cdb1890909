#include "flybs/capacity.hpp"

#include <cmath>

namespace flybs {
namespace {

double floored_distance(const Vec3& a, const Vec3& b) {
    return std::max(kMinLinkDistance, distance(a, b));
}

double log2_capacity(double bandwidth_hz, double signal, double noise_plus_interf) {
    return bandwidth_hz * std::log2(1.0 + signal / noise_plus_interf);
}

}  // namespace

// Backhaul transmissions ride narrow directional beams and are not counted
// as co-channel interference; only user-serving (sector) transmissions mark
// a channel busy.
void refresh_channel_usage(NetworkState& s, const ChannelPlan& plan) {
    const int n_bs = s.num_flybs() + 1;
    s.channel_usage.setZero(n_bs, plan.num_channels);
    for (int n = 0; n < s.serving.size(); ++n)
        if (s.serving[n] >= 0 && s.user_channel[n] >= 0)
            s.channel_usage(s.serving[n], s.user_channel[n]) = 1;
}

bool bs_uses_channel(const NetworkState& s, const ChannelPlan& plan, int b, int c) {
    if (c < 0) return false;
    if (s.channel_usage.rows() == s.num_flybs() + 1 &&
        s.channel_usage.cols() == plan.num_channels)
        return s.channel_usage(b, c) != 0;
    // Derivation fallback for states built without a usage refresh.
    for (int n = 0; n < s.serving.size(); ++n)
        if (s.serving[n] == b && s.user_channel[n] == c) return true;
    return false;
}

double user_link_power(const NetworkState& s, int n, int b) {
    const double d = floored_distance(s.user_positions[n], s.bs_positions[b]);
    return received_power(s.radio.user_gain * s.tx_power_w(b), d, s.radio.alpha_user);
}

// Power of BS tx's user-serving (sector) transmission at BS rx; the
// interference a backhaul receiver picks up from co-channel access traffic.
double bs_link_power(const NetworkState& s, int rx, int tx) {
    const double d = floored_distance(s.bs_positions[rx], s.bs_positions[tx]);
    return received_power(s.radio.user_gain * s.tx_power_w(tx), d, s.radio.alpha_bs);
}

// Boresight power of the directional backhaul beam from tx at rx.
double backhaul_link_power(const NetworkState& s, int rx, int tx) {
    const double d = floored_distance(s.bs_positions[rx], s.bs_positions[tx]);
    return received_power(s.radio.backhaul_gain * s.tx_power_w(tx), d, s.radio.alpha_bs);
}

namespace {

double user_capacity_on(const NetworkState& s, const ChannelPlan& plan, int n, int b,
                        double bandwidth_hz, int channel) {
    const double signal = user_link_power(s, n, b);
    double interference = 0.0;
    for (int o = 0; o <= s.num_flybs(); ++o) {
        if (o == b) continue;
        if (s.radio.interference == InterferenceMode::SameChannel &&
            !bs_uses_channel(s, plan, o, channel))
            continue;
        interference += user_link_power(s, n, o);
    }
    return log2_capacity(bandwidth_hz, signal, s.radio.noise_w + interference);
}

}  // namespace

double user_capacity(const NetworkState& s, const ChannelPlan& plan, int n, int b) {
    const int c = s.user_channel[n];
    if (c < 0) return 0.0;
    return user_capacity_on(s, plan, n, b, plan.bandwidths[c], c);
}

double user_capacity_if_served(const NetworkState& s, const ChannelPlan& plan, int n, int b) {
    const std::vector<int> pool = plan.user_channel_pool(b, s.num_flybs());
    if (pool.empty()) return 0.0;
    return user_capacity_on(s, plan, n, b, plan.bandwidths[pool.front()], pool.front());
}

double relay_flybs_capacity(const NetworkState& s, const ChannelPlan& plan, int m_access) {
    const int relay = s.relay_index();
    const double signal = backhaul_link_power(s, m_access, relay);
    double total = 0.0;
    for (int k : plan.backhaul[m_access]) {
        double interference = 0.0;
        for (int o = 0; o <= s.num_flybs(); ++o) {
            if (o == relay || o == m_access) continue;
            if (s.radio.interference == InterferenceMode::SameChannel &&
                !bs_uses_channel(s, plan, o, k))
                continue;
            interference += s.radio.offaxis_rejection * bs_link_power(s, m_access, o);
        }
        total += log2_capacity(plan.bandwidths[k], signal, s.radio.noise_w + interference);
    }
    return total;
}

double gbs_relay_capacity(const NetworkState& s, const ChannelPlan& plan) {
    const int relay = s.relay_index();
    const int gbs = s.gbs_index();
    const double signal = backhaul_link_power(s, relay, gbs);
    double total = 0.0;
    for (int k : plan.gbs_relay) {
        double interference = 0.0;
        for (int m = 0; m < s.num_access(); ++m) {
            if (s.radio.interference == InterferenceMode::SameChannel &&
                !bs_uses_channel(s, plan, m, k))
                continue;
            interference += s.radio.offaxis_rejection * bs_link_power(s, relay, m);
        }
        total += log2_capacity(plan.bandwidths[k], signal, s.radio.noise_w + interference);
    }
    return total;
}

double sum_capacity(const NetworkState& s, const ChannelPlan& plan) {
    double total = 0.0;
    for (int n = 0; n < s.num_users(); ++n)
        if (s.serving[n] >= 0) total += user_capacity(s, plan, n, s.serving[n]);
    return total;
}

double access_load(const NetworkState& s, const ChannelPlan& plan, int b) {
    double total = 0.0;
    for (int n = 0; n < s.num_users(); ++n)
        if (s.serving[n] == b) total += user_capacity(s, plan, n, b);
    return total;
}

}  // namespace flybs
