#include "flybs/capacity.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

using namespace flybs;
using namespace flybs::testing;

namespace {

// Minimal hand-built plan: two direct channels each for relay and GBS, the
// rest backhaul, all 1 MHz.
ChannelPlan tiny_plan(int num_flybs, int backhaul_per_access = 1) {
    ChannelPlan plan;
    const int n_access = num_flybs - 1;
    plan.num_channels = 4 + n_access * backhaul_per_access;
    plan.bandwidths = Eigen::VectorXd::Constant(plan.num_channels, 1e6);
    plan.direct_relay = {0, 1};
    plan.direct_gbs = {0, 1};
    int next = 2;
    plan.backhaul.resize(n_access);
    for (int m = 0; m < n_access; ++m)
        for (int k = 0; k < backhaul_per_access; ++k) plan.backhaul[m].push_back(next++);
    for (int c = 2; c < plan.num_channels; ++c) plan.gbs_relay.push_back(c);
    return plan;
}

}  // namespace

TEST_CASE("user capacity: unit SNR with no interference gives B bits/s") {
    // Relay serves the user at SNR 1; GBS power zeroed so interference is 0.
    NetworkState s = make_state({{0, 0, 100}, {500, 0, 0}}, {{0, 0, 0}}, {0}, {0});
    s.radio.gbs_tx_w = 0.0;
    const ChannelPlan plan = tiny_plan(1, 0);
    // d = 100, alpha = 2 -> p = 1e-4 = noise
    CHECK(user_capacity(s, plan, 0, 0) == doctest::Approx(1e6));
}

TEST_CASE("user capacity: zero received power gives zero") {
    NetworkState s = make_state({{0, 0, 100}, {500, 0, 0}}, {{0, 0, 0}}, {0}, {0});
    s.radio.flybs_tx_w = 0.0;
    s.radio.gbs_tx_w = 0.0;
    const ChannelPlan plan = tiny_plan(1, 0);
    CHECK(user_capacity(s, plan, 0, 0) == 0.0);
}

TEST_CASE("user capacity: two BSs, SINR 50 hand fixture") {
    // Serving d=10 -> p=0.01; interferer d=100 -> p=1e-4; noise 1e-4.
    NetworkState s = make_state({{0, 0, 10}, {100, 0, 0}}, {{0, 0, 0}}, {0}, {0});
    const ChannelPlan plan = tiny_plan(1, 0);
    CHECK(user_capacity(s, plan, 0, 0) == doctest::Approx(1e6 * std::log2(51.0)));
}

TEST_CASE("relay->FlyBS capacity: empty backhaul set is zero") {
    NetworkState s = make_state({{0, 0, 100}, {200, 0, 100}, {500, 0, 0}}, {{0, 0, 0}}, {-1}, {-1});
    ChannelPlan plan = tiny_plan(2, 1);
    plan.backhaul[0].clear();
    CHECK(relay_flybs_capacity(s, plan, 0) == 0.0);
}

TEST_CASE("relay->FlyBS capacity: single channel SNR 3 gives 2B") {
    const double d = std::sqrt(10000.0 / 3.0);  // p/sigma^2 = 3
    NetworkState s = make_state({{0, 0, 100}, {d, 0, 100}, {500, 0, 0}}, {{0, 0, 0}}, {-1}, {-1});
    s.radio.gbs_tx_w = 0.0;
    const ChannelPlan plan = tiny_plan(2, 1);
    CHECK(relay_flybs_capacity(s, plan, 0) == doctest::Approx(2e6));
}

TEST_CASE("relay->FlyBS capacity matches a scalar oracle on an explicit geometry") {
    // One access FlyBS, relay, GBS; interference at the access FlyBS comes
    // from the GBS only.
    NetworkState s = make_state({{0, 0, 150}, {320, 40, 180}, {900, 0, 25}},
                                {{0, 0, 0}}, {-1}, {-1});
    const ChannelPlan plan = tiny_plan(2, 2);

    const double d_sig = (s.bs_positions[0] - s.bs_positions[1]).norm();
    const double d_int = (s.bs_positions[0] - s.bs_positions[2]).norm();
    const double signal = std::pow(d_sig, -2.0);
    const double interf = std::pow(d_int, -2.0);
    const double oracle = 2.0 * 1e6 * std::log2(1.0 + signal / (1e-4 + interf));
    CHECK(relay_flybs_capacity(s, plan, 0) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("GBS->relay capacity: empty channel set is zero") {
    NetworkState s = make_state({{0, 0, 100}, {200, 0, 100}, {500, 0, 0}}, {{0, 0, 0}}, {-1}, {-1});
    ChannelPlan plan = tiny_plan(2, 1);
    plan.gbs_relay.clear();
    CHECK(gbs_relay_capacity(s, plan) == 0.0);
}

TEST_CASE("GBS->relay capacity: single channel, zero interference, SNR 1 gives B") {
    NetworkState s = make_state({{0, 0, 100}, {100, 0, 0}, {0, 0, 0}}, {{1000, 0, 0}}, {-1}, {-1});
    s.radio.flybs_tx_w = 0.0;  // silences access interference (and user links)
    ChannelPlan plan = tiny_plan(2, 1);
    plan.gbs_relay = {2};  // one channel
    // relay at (100,0,0)... GBS at origin: d = 100 -> p = 1e-4 = noise
    s.bs_positions = {{500, 500, 100}, {100, 0, 0}, {0, 0, 0}};
    CHECK(gbs_relay_capacity(s, plan) == doctest::Approx(1e6));
}

TEST_CASE("GBS->relay capacity matches a scalar oracle with access interference") {
    NetworkState s = make_state({{100, 0, 150}, {250, -40, 120}, {400, 10, 200}, {0, 0, 25}},
                                {{0, 0, 0}}, {-1}, {-1});
    const ChannelPlan plan = tiny_plan(3, 1);

    const int relay = 2, gbs = 3;
    const double signal = std::pow((s.bs_positions[relay] - s.bs_positions[gbs]).norm(), -2.0);
    double interf = 0.0;
    for (int m = 0; m < 2; ++m)
        interf += std::pow((s.bs_positions[relay] - s.bs_positions[m]).norm(), -2.0);
    double oracle = 0.0;
    for (size_t k = 0; k < plan.gbs_relay.size(); ++k)
        oracle += 1e6 * std::log2(1.0 + signal / (1e-4 + interf));
    CHECK(gbs_relay_capacity(s, plan) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("sum capacity: empty association is zero, single association matches user term") {
    NetworkState s = make_state({{0, 0, 100}, {200, 0, 100}, {500, 0, 0}},
                                {{10, 0, 0}, {300, 0, 0}}, {-1, -1}, {-1, -1});
    const ChannelPlan plan = tiny_plan(2, 1);
    CHECK(sum_capacity(s, plan) == 0.0);

    s.serving[0] = 0;
    s.user_channel[0] = 2;
    CHECK(sum_capacity(s, plan) == doctest::Approx(user_capacity(s, plan, 0, 0)));
}

TEST_CASE("sum capacity equals the sum of independently evaluated user terms") {
    NetworkState s = make_state({{0, 0, 120}, {400, 0, 140}, {800, 0, 25}},
                                {{30, 10, 0}, {-50, 20, 0}, {390, -10, 0}, {420, 30, 0}},
                                {0, 0, 1, 1}, {0, 1, 0, 1});
    const ChannelPlan plan = tiny_plan(2, 1);
    double expected = 0.0;
    for (int n = 0; n < 4; ++n) expected += oracle_user_capacity(s, 1e6, n, s.serving[n]);
    CHECK(sum_capacity(s, plan) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("a user's capacity does not depend on other users' association") {
    NetworkState s = make_state({{0, 0, 120}, {400, 0, 140}, {800, 0, 25}},
                                {{30, 10, 0}, {-50, 20, 0}, {390, -10, 0}},
                                {0, 0, 1}, {0, 1, 0});
    const ChannelPlan plan = tiny_plan(2, 1);
    const double before = user_capacity(s, plan, 0, 0);
    s.serving[2] = 2;  // reassociate another user
    CHECK(user_capacity(s, plan, 0, 0) == before);
}

TEST_CASE("moving the serving BS closer never decreases capacity") {
    RandomStream rng(11);
    const ChannelPlan plan = tiny_plan(2, 1);
    for (int trial = 0; trial < 50; ++trial) {
        NetworkState s = make_state(
            {{rng.uniform(-200, 200), rng.uniform(-200, 200), rng.uniform(100, 300)},
             {rng.uniform(-200, 200), rng.uniform(-200, 200), rng.uniform(100, 300)},
             {rng.uniform(-200, 200), rng.uniform(-200, 200), 25}},
            {{rng.uniform(-50, 50), rng.uniform(-50, 50), 0}}, {0}, {2});
        const double before = user_capacity(s, plan, 0, 0);
        // Pull the serving BS halfway toward the user; interferers fixed.
        s.bs_positions[0] = s.user_positions[0] + 0.5 * (s.bs_positions[0] - s.user_positions[0]);
        CHECK(user_capacity(s, plan, 0, 0) >= before - 1e-9);
    }
}

TEST_CASE("capacities stay nonnegative and finite") {
    RandomStream rng(13);
    const ChannelPlan plan = tiny_plan(2, 1);
    for (int trial = 0; trial < 50; ++trial) {
        NetworkState s = make_state(
            {{rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(100, 300)},
             {rng.uniform(-500, 500), rng.uniform(-500, 500), rng.uniform(100, 300)},
             {0, 0, 25}},
            {{rng.uniform(-500, 500), rng.uniform(-500, 500), 0}}, {0}, {3});
        const double c = user_capacity(s, plan, 0, 0);
        CHECK(c >= 0.0);
        CHECK(std::isfinite(c));
        CHECK(std::isfinite(relay_flybs_capacity(s, plan, 0)));
        CHECK(std::isfinite(gbs_relay_capacity(s, plan)));
    }
}

TEST_CASE("same-channel mode counts only co-channel user transmissions") {
    // Two access FlyBSs each serving one user; the GBS is silent.
    NetworkState s = make_state({{0, 0, 100}, {400, 0, 100}, {300, 0, 100}, {900, 0, 25}},
                                {{0, 0, 0}, {400, 0, 0}}, {0, 1}, {0, 0});
    s.radio.gbs_tx_w = 0.0;
    ChannelPlan plan;
    plan.num_channels = 4;
    plan.bandwidths = Eigen::VectorXd::Constant(4, 1e6);
    plan.direct_relay = {3};
    plan.direct_gbs = {3};
    plan.backhaul = {{0, 1}, {2}};
    plan.gbs_relay = {0, 1, 2};

    s.radio.interference = InterferenceMode::Full;
    const double with_full = user_capacity(s, plan, 0, 0);

    s.radio.interference = InterferenceMode::SameChannel;
    refresh_channel_usage(s, plan);
    const double collided = user_capacity(s, plan, 0, 0);
    // full mode additionally counts the idle relay, so it sits strictly lower
    CHECK(with_full < collided);
    const double d_serv = (s.user_positions[0] - s.bs_positions[0]).norm();
    const double d_int = (s.user_positions[0] - s.bs_positions[1]).norm();
    CHECK(collided == doctest::Approx(1e6 * std::log2(1.0 + std::pow(d_serv, -2.0) /
                                                                (1e-4 + std::pow(d_int, -2.0)))));

    s.user_channel[1] = 1;  // move the other user's channel away
    refresh_channel_usage(s, plan);
    const double clean = user_capacity(s, plan, 0, 0);
    CHECK(clean > collided);
    // no co-channel transmitter and silent GBS: pure SNR
    const double d = (s.user_positions[0] - s.bs_positions[0]).norm();
    const double snr = std::pow(d, -2.0) / s.radio.noise_w;
    CHECK(clean == doctest::Approx(1e6 * std::log2(1.0 + snr)));
}

TEST_CASE("usage table agrees with the on-the-fly derivation") {
    NetworkState s = make_state({{0, 0, 100}, {400, 0, 100}, {300, 0, 100}, {900, 0, 25}},
                                {{0, 0, 0}, {400, 0, 0}, {350, 10, 0}}, {0, 1, 2}, {0, 2, 3});
    ChannelPlan plan;
    plan.num_channels = 4;
    plan.bandwidths = Eigen::VectorXd::Constant(4, 1e6);
    plan.direct_relay = {3};
    plan.direct_gbs = {3};
    plan.backhaul = {{0, 1}, {2}};
    plan.gbs_relay = {0, 1, 2};

    NetworkState with_table = s;
    refresh_channel_usage(with_table, plan);
    for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
            CHECK(bs_uses_channel(with_table, plan, b, c) == bs_uses_channel(s, plan, b, c));
}

TEST_CASE("off-axis rejection weakens backhaul interference") {
    NetworkState s = make_state({{0, 0, 150}, {320, 40, 180}, {900, 0, 25}},
                                {{0, 0, 0}}, {-1}, {-1});
    ChannelPlan plan;
    plan.num_channels = 4;
    plan.bandwidths = Eigen::VectorXd::Constant(4, 1e6);
    plan.direct_relay = {0, 1};
    plan.direct_gbs = {0, 1};
    plan.backhaul = {{2, 3}};
    plan.gbs_relay = {2, 3};

    const double isotropic = relay_flybs_capacity(s, plan, 0);
    s.radio.offaxis_rejection = 0.01;
    const double rejected = relay_flybs_capacity(s, plan, 0);
    CHECK(rejected > isotropic);
}
