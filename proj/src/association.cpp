#include "flybs/association.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace flybs {

AssociationProblem build_utilities(const NetworkState& s, const ChannelPlan& plan) {
    const int n_users = s.num_users();
    const int n_bs = s.num_flybs() + 1;
    AssociationProblem p;
    p.utility.resize(n_users, n_bs);
    p.capacity_limits.resize(n_bs);
    for (int b = 0; b < n_bs; ++b)
        p.capacity_limits[b] = plan.association_capacity(b, s.num_flybs());

    if (s.radio.interference == InterferenceMode::Full) {
        // Interference from all non-serving BSs = total received - signal.
        for (int n = 0; n < n_users; ++n) {
            double total_rx = 0.0;
            std::vector<double> rx(n_bs);
            for (int b = 0; b < n_bs; ++b) {
                rx[b] = user_link_power(s, n, b);
                total_rx += rx[b];
            }
            for (int b = 0; b < n_bs; ++b) {
                const std::vector<int> pool = plan.user_channel_pool(b, s.num_flybs());
                if (pool.empty()) {
                    p.utility(n, b) = 0.0;
                    continue;
                }
                const double denom = s.radio.noise_w + total_rx - rx[b];
                p.utility(n, b) = plan.bandwidths[pool.front()] * std::log2(1.0 + rx[b] / denom);
            }
        }
    } else {
        for (int n = 0; n < n_users; ++n)
            for (int b = 0; b < n_bs; ++b)
                p.utility(n, b) = user_capacity_if_served(s, plan, n, b);
    }
    return p;
}

// Successive shortest augmenting paths on a graph compressed to the BS
// nodes: every augmentation either admits one unassigned user or chains
// reassignments between BSs. With B = M+1 columns an augment costs
// O(N*B + B^3), and at most N augments occur, so the solve stays exact
// (transportation LPs have integral optima) without a generic LP solver.
Eigen::VectorXi solve_association(const AssociationProblem& p) {
    const int n_users = static_cast<int>(p.utility.rows());
    const int n_bs = static_cast<int>(p.utility.cols());
    const double inf = std::numeric_limits<double>::infinity();

    Eigen::VectorXi serving = Eigen::VectorXi::Constant(n_users, -1);
    std::vector<int> load(n_bs, 0);

    std::vector<double> enter(n_bs), dist(n_bs);
    std::vector<int> enter_user(n_bs), parent_bs(n_bs), parent_user(n_bs);
    Eigen::MatrixXd swap_cost(n_bs, n_bs);
    Eigen::MatrixXi swap_user(n_bs, n_bs);

    for (int augment = 0; augment < n_users; ++augment) {
        // Arc weights of the compressed residual graph. Ties resolve to the
        // lowest user index (ascending scan, strict improvement).
        std::fill(enter.begin(), enter.end(), inf);
        std::fill(enter_user.begin(), enter_user.end(), -1);
        swap_cost.setConstant(inf);
        swap_user.setConstant(-1);
        for (int n = 0; n < n_users; ++n) {
            const int b = serving[n];
            if (b < 0) {
                for (int b2 = 0; b2 < n_bs; ++b2) {
                    const double w = -p.utility(n, b2);
                    if (w < enter[b2]) {
                        enter[b2] = w;
                        enter_user[b2] = n;
                    }
                }
            } else {
                for (int b2 = 0; b2 < n_bs; ++b2) {
                    if (b2 == b) continue;
                    const double w = p.utility(n, b) - p.utility(n, b2);
                    if (w < swap_cost(b, b2)) {
                        swap_cost(b, b2) = w;
                        swap_user(b, b2) = n;
                    }
                }
            }
        }

        // Bellman-Ford over the BS nodes; simple shortest paths have at
        // most n_bs arcs (the residual graph of an optimal partial flow
        // has no negative cycles).
        for (int b = 0; b < n_bs; ++b) {
            dist[b] = enter[b];
            parent_bs[b] = -1;
            parent_user[b] = enter_user[b];
        }
        for (int round = 0; round < n_bs; ++round) {
            bool changed = false;
            for (int b = 0; b < n_bs; ++b) {
                if (dist[b] == inf) continue;
                for (int b2 = 0; b2 < n_bs; ++b2) {
                    if (swap_user(b, b2) < 0) continue;
                    const double nd = dist[b] + swap_cost(b, b2);
                    if (nd < dist[b2] - 1e-15) {
                        dist[b2] = nd;
                        parent_bs[b2] = b;
                        parent_user[b2] = swap_user(b, b2);
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }

        int exit_bs = -1;
        double best = -1e-12;  // augment only while strictly improving
        for (int b = 0; b < n_bs; ++b)
            if (load[b] < p.capacity_limits[b] && dist[b] < best) {
                best = dist[b];
                exit_bs = b;
            }
        if (exit_bs < 0) break;

        // Unwind the chain back to the entering user and apply the moves.
        std::vector<std::pair<int, int>> moves;  // (user, new BS)
        int b = exit_bs;
        int hops = 0;
        while (b >= 0 && hops++ <= n_bs + 1) {
            moves.emplace_back(parent_user[b], b);
            if (parent_bs[b] < 0) break;
            b = parent_bs[b];
        }
        if (hops > n_bs + 1) break;  // cycle guard; cannot occur for exact arithmetic
        for (const auto& [n, to] : moves) serving[n] = to;
        load[exit_bs] += 1;
    }
    return serving;
}

Eigen::VectorXi assign_channels(const Eigen::VectorXi& serving, const ChannelPlan& plan,
                                int num_flybs) {
    const int n_users = static_cast<int>(serving.size());
    Eigen::VectorXi channels = Eigen::VectorXi::Constant(n_users, -1);
    for (int b = 0; b <= num_flybs; ++b) {
        const std::vector<int> pool = plan.user_channel_pool(b, num_flybs);
        size_t next = 0;
        for (int n = 0; n < n_users; ++n) {
            if (serving[n] != b) continue;
            if (next >= pool.size())
                throw std::logic_error("assign_channels: BS load exceeds its channel pool");
            channels[n] = pool[next++];
        }
    }
    return channels;
}

}  // namespace flybs
