#pragma once

#include "flybs/capacity.hpp"
#include "flybs/geometry.hpp"

#include <functional>
#include <optional>
#include <span>

namespace flybs {

// Range of distances reachable within one time step. d_min is floored at
// kMinLinkDistance to keep received powers finite.
struct DistanceBounds {
    double d_min = 0.0;
    double d_max = 0.0;
};

DistanceBounds distance_bounds_user(const Vec3& prev_bs, const Vec3& user, double vmax,
                                    double delta);

// Both endpoints may move; the GBS passes vmax = 0.
DistanceBounds distance_bounds_bs_pair(const Vec3& prev_a, const Vec3& prev_b, double vmax_a,
                                       double vmax_b, double delta);

// Worst-case bound machinery for the backhaul constraints. All distances are
// anchored at the start-of-step snapshot held in `anchor` (BS positions at
// k-1, user positions at k); `vmax` has one entry per BS (GBS last, 0).
//
// Upper bound on the traffic the m-th access FlyBS must haul: every serving
// distance at its minimum, every interference distance at its maximum.
double access_load_upper_bound(const NetworkState& anchor, const ChannelPlan& plan, int m,
                               std::span<const double> vmax, double delta);

// Lower bound on the relay -> m-th FlyBS capacity as a function of the
// realized relay distance d_signal; strictly decreasing in d_signal.
double access_backhaul_lower_bound(const NetworkState& anchor, const ChannelPlan& plan, int m,
                                   double d_signal, std::span<const double> vmax, double delta);

// Upper bound on the aggregate relay -> access traffic (left side of the
// GBS-link constraint).
double relay_load_upper_bound(const NetworkState& anchor, const ChannelPlan& plan,
                              std::span<const double> vmax, double delta);

// Lower bound on the GBS -> relay capacity as a function of the realized
// GBS distance d_signal; strictly decreasing in d_signal.
double relay_backhaul_lower_bound(const NetworkState& anchor, const ChannelPlan& plan,
                                  double d_signal, std::span<const double> vmax, double delta);

// Largest D in [bracket.d_min, bracket.d_max] with rhs(D) >= lhs, to within
// tol, for a strictly decreasing rhs. Returns bracket.d_max when the
// constraint is inactive over the whole bracket and nullopt when even the
// closest approach cannot satisfy it.
std::optional<double> bisect_capacity_radius(double lhs,
                                             const std::function<double(double)>& rhs,
                                             DistanceBounds bracket, double tol);

}  // namespace flybs
