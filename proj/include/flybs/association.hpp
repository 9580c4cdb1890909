#pragma once

#include "flybs/capacity.hpp"

namespace flybs {

// User-to-BS assignment instance: utility[n][b] is the capacity user n
// would get from BS b, capacity_limits[b] the number of users BS b can
// carry (its channel budget).
struct AssociationProblem {
    Eigen::MatrixXd utility;        // N x (M+1), bits/s, >= 0
    Eigen::VectorXi capacity_limits;  // M+1
};

AssociationProblem build_utilities(const NetworkState& s, const ChannelPlan& plan);

// Exactly optimal assignment maximizing total utility subject to one BS per
// user and the per-BS limits. The transportation polytope is integral, so a
// successive-shortest-path flow solve returns the LP optimum. Users whose
// best contribution is zero stay unassociated. Returns serving indices
// (BS per user, -1 for none); deterministic for identical inputs.
Eigen::VectorXi solve_association(const AssociationProblem& p);

// Deterministic channel assignment: per BS, associated users in ascending
// index order take the BS's pool channels in ascending order.
Eigen::VectorXi assign_channels(const Eigen::VectorXi& serving, const ChannelPlan& plan,
                                int num_flybs);

}  // namespace flybs
