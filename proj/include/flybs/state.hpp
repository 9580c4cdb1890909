#pragma once

#include "flybs/channel.hpp"
#include "flybs/types.hpp"

#include <vector>

namespace flybs {

enum class InterferenceMode { Full, SameChannel };

// Radio context shared by every link in a snapshot. Transmit powers enter
// as the 1 m reference power coefficient of the respective transmitter.
struct RadioContext {
    double gbs_tx_w = dbm_to_watt(37.0);
    double flybs_tx_w = dbm_to_watt(30.0);
    double alpha_user = 2.8;  // BS-to-user pathloss exponent
    double alpha_bs = 2.1;    // BS-to-BS pathloss exponent
    // Composite reference gains at 1 m (carrier pathloss and antennas):
    // sector beams covering users, and directional backhaul beams. The
    // backhaul receive pattern rejects off-axis interference.
    double user_gain = db_to_linear(-50.0);
    double backhaul_gain = db_to_linear(-40.0);
    double offaxis_rejection = db_to_linear(-20.0);
    double noise_w = dbm_to_watt(-90.0);
    InterferenceMode interference = InterferenceMode::Full;
};

// One time-step snapshot of the network. BS index convention:
//   0 .. M-2  access FlyBSs
//   M-1       relay FlyBS
//   M         GBS
// serving[n] is the BS index the n-th user is associated with, or -1.
struct NetworkState {
    std::vector<Vec3> bs_positions;    // size M+1
    std::vector<Vec3> user_positions;  // size N
    Eigen::VectorXi serving;           // size N, BS index or -1
    Eigen::VectorXi user_channel;      // size N, channel index or -1
    RadioContext radio;
    int time_step = 0;
    // Which BS serves a user on which channel (backhaul beams are
    // directional and never counted as interference). Consulted by
    // SameChannel interference; refresh after every channel assignment.
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> channel_usage;  // (M+1) x C

    int num_users() const { return static_cast<int>(user_positions.size()); }
    int num_flybs() const { return static_cast<int>(bs_positions.size()) - 1; }
    int num_access() const { return num_flybs() - 1; }
    int relay_index() const { return num_flybs() - 1; }
    int gbs_index() const { return num_flybs(); }
    bool is_access(int b) const { return b >= 0 && b < relay_index(); }
    bool is_gbs(int b) const { return b == gbs_index(); }

    double tx_power_w(int b) const { return is_gbs(b) ? radio.gbs_tx_w : radio.flybs_tx_w; }

    int load_of(int b) const {
        int c = 0;
        for (int n = 0; n < serving.size(); ++n) c += (serving[n] == b);
        return c;
    }
};

}  // namespace flybs
