#include "flybs/feasibility.hpp"

#include <cmath>

namespace flybs {
namespace {

double clamped(double d) { return std::max(kMinLinkDistance, d); }

// Sector (user-serving) transmission of tx received at a BS d meters away.
double pair_power(const NetworkState& s, int tx, double d) {
    return received_power(s.radio.user_gain * s.tx_power_w(tx), clamped(d), s.radio.alpha_bs);
}

// Boresight backhaul beam of tx received d meters away.
double beam_power(const NetworkState& s, int tx, double d) {
    return received_power(s.radio.backhaul_gain * s.tx_power_w(tx), clamped(d), s.radio.alpha_bs);
}

bool interferes(const NetworkState& s, const ChannelPlan& plan, int b, int channel) {
    return s.radio.interference == InterferenceMode::Full || bs_uses_channel(s, plan, b, channel);
}

}  // namespace

DistanceBounds distance_bounds_user(const Vec3& prev_bs, const Vec3& user, double vmax,
                                    double delta) {
    const double d = distance(prev_bs, user);
    return {clamped(d - vmax * delta), clamped(d + vmax * delta)};
}

DistanceBounds distance_bounds_bs_pair(const Vec3& prev_a, const Vec3& prev_b, double vmax_a,
                                       double vmax_b, double delta) {
    const double d = distance(prev_a, prev_b);
    const double reach = (vmax_a + vmax_b) * delta;
    return {clamped(d - reach), clamped(d + reach)};
}

double access_load_upper_bound(const NetworkState& anchor, const ChannelPlan& plan, int m,
                               std::span<const double> vmax, double delta) {
    const double alpha = anchor.radio.alpha_user;
    double total = 0.0;
    for (int n = 0; n < anchor.num_users(); ++n) {
        if (anchor.serving[n] != m || anchor.user_channel[n] < 0) continue;
        const DistanceBounds serv =
            distance_bounds_user(anchor.bs_positions[m], anchor.user_positions[n], vmax[m], delta);
        const double signal =
            received_power(anchor.radio.user_gain * anchor.tx_power_w(m), serv.d_min, alpha);
        double interference = 0.0;
        for (int o = 0; o <= anchor.num_flybs(); ++o) {
            if (o == m || !interferes(anchor, plan, o, anchor.user_channel[n])) continue;
            const DistanceBounds ob = distance_bounds_user(anchor.bs_positions[o],
                                                           anchor.user_positions[n], vmax[o], delta);
            interference +=
                received_power(anchor.radio.user_gain * anchor.tx_power_w(o), ob.d_max, alpha);
        }
        total += plan.bandwidths[anchor.user_channel[n]] *
                 std::log2(1.0 + signal / (anchor.radio.noise_w + interference));
    }
    return total;
}

double access_backhaul_lower_bound(const NetworkState& anchor, const ChannelPlan& plan, int m,
                                   double d_signal, std::span<const double> vmax, double delta) {
    const int relay = anchor.relay_index();
    const double signal = beam_power(anchor, relay, d_signal);
    double total = 0.0;
    for (int k : plan.backhaul[m]) {
        double interference = 0.0;
        for (int o = 0; o <= anchor.num_flybs(); ++o) {
            if (o == relay || o == m || !interferes(anchor, plan, o, k)) continue;
            const DistanceBounds ob = distance_bounds_bs_pair(
                anchor.bs_positions[m], anchor.bs_positions[o], vmax[m], vmax[o], delta);
            interference += anchor.radio.offaxis_rejection * pair_power(anchor, o, ob.d_min);
        }
        total += plan.bandwidths[k] *
                 std::log2(1.0 + signal / (anchor.radio.noise_w + interference));
    }
    return total;
}

double relay_load_upper_bound(const NetworkState& anchor, const ChannelPlan& plan,
                              std::span<const double> vmax, double delta) {
    const int relay = anchor.relay_index();
    double total = 0.0;
    for (int m = 0; m < anchor.num_access(); ++m) {
        const DistanceBounds rel = distance_bounds_bs_pair(
            anchor.bs_positions[m], anchor.bs_positions[relay], vmax[m], vmax[relay], delta);
        const double signal = beam_power(anchor, relay, rel.d_min);
        for (int k : plan.backhaul[m]) {
            double interference = 0.0;
            for (int o = 0; o <= anchor.num_flybs(); ++o) {
                if (o == relay || o == m || !interferes(anchor, plan, o, k)) continue;
                const DistanceBounds ob = distance_bounds_bs_pair(
                    anchor.bs_positions[m], anchor.bs_positions[o], vmax[m], vmax[o], delta);
                interference +=
                    anchor.radio.offaxis_rejection * pair_power(anchor, o, ob.d_max);
            }
            total += plan.bandwidths[k] *
                     std::log2(1.0 + signal / (anchor.radio.noise_w + interference));
        }
    }
    return total;
}

double relay_backhaul_lower_bound(const NetworkState& anchor, const ChannelPlan& plan,
                                  double d_signal, std::span<const double> vmax, double delta) {
    const int relay = anchor.relay_index();
    const int gbs = anchor.gbs_index();
    const double signal = beam_power(anchor, gbs, d_signal);
    double total = 0.0;
    for (int k : plan.gbs_relay) {
        double interference = 0.0;
        for (int m = 0; m < anchor.num_access(); ++m) {
            if (!interferes(anchor, plan, m, k)) continue;
            const DistanceBounds mb = distance_bounds_bs_pair(
                anchor.bs_positions[relay], anchor.bs_positions[m], vmax[relay], vmax[m], delta);
            interference += anchor.radio.offaxis_rejection * pair_power(anchor, m, mb.d_min);
        }
        total += plan.bandwidths[k] *
                 std::log2(1.0 + signal / (anchor.radio.noise_w + interference));
    }
    return total;
}

std::optional<double> bisect_capacity_radius(double lhs,
                                             const std::function<double(double)>& rhs,
                                             DistanceBounds bracket, double tol) {
    if (rhs(bracket.d_max) >= lhs) return bracket.d_max;
    if (rhs(bracket.d_min) < lhs) return std::nullopt;
    double lo = bracket.d_min;  // rhs(lo) >= lhs
    double hi = bracket.d_max;  // rhs(hi) <  lhs
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rhs(mid) >= lhs)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace flybs
