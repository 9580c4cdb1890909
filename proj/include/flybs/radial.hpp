#pragma once

#include "flybs/capacity.hpp"

#include <span>
#include <vector>

namespace flybs {

enum class ApproxMode { Gradient, PaperLiteral };

// First-order model of the sum capacity in the squared user-to-FlyBS
// distances: sum_capacity ~= capacity_at_expansion
//                            + sum_{n,m} beta(n,m) * (d^2(n,m) - d^2 at expansion).
// beta has one column per FlyBS (access FlyBSs then relay); the GBS never
// moves so its column is folded into the constant.
struct LinearModel {
    Eigen::MatrixXd beta;  // N x M, bits/s per m^2
    double capacity_at_expansion = 0.0;
    std::vector<double> expansion_sq_dist;  // flattened N x M, d^2 at expansion
};

// Per-FlyBS term of the radial objective. A degenerate term (coefficient
// sum ~ 0) freezes that FlyBS for the current iteration.
struct RadialTerm {
    double rho = 0.0;  // bits/s per m^2
    Vec3 attractor = Vec3::Zero();
    bool degenerate = false;
};

struct RadialObjective {
    double zeta = 0.0;  // bits/s
    std::vector<RadialTerm> per_flybs;  // size M
};

// Gradient mode differentiates the exact SINR capacity with respect to each
// squared distance, so interference coupling survives and rho may take
// either sign. PaperLiteral chains log2(1+X) ~= X/ln2 with a first-order
// binomial expansion of (psi^2 + chi)^(-alpha/2) around the current squared
// distance, which cancels the interference terms and leaves serving-link
// coefficients only.
LinearModel linearize_capacity(const NetworkState& s, const ChannelPlan& plan, ApproxMode mode);

// Complete the square per FlyBS: sum of beta * ||q_m - v_n||^2 becomes
// zeta - sum_m rho_m * ||q_m - q0_m||^2 plus position-independent residue.
RadialObjective build_radial(const LinearModel& model, const NetworkState& s);

// Evaluate the radial objective at the given FlyBS positions (size M).
double radial_value(const RadialObjective& r, std::span<const Vec3> flybs_positions);

}  // namespace flybs
