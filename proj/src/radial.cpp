#include "flybs/radial.hpp"

#include <cmath>

namespace flybs {
namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

LinearModel linearize_capacity(const NetworkState& s, const ChannelPlan& plan, ApproxMode mode) {
    const int n_users = s.num_users();
    const int n_flybs = s.num_flybs();

    LinearModel model;
    model.beta = Eigen::MatrixXd::Zero(n_users, n_flybs);
    model.capacity_at_expansion = sum_capacity(s, plan);
    model.expansion_sq_dist.assign(static_cast<size_t>(n_users) * n_flybs, 0.0);
    for (int n = 0; n < n_users; ++n)
        for (int m = 0; m < n_flybs; ++m) {
            const double d = std::max(kMinLinkDistance,
                                      distance(s.user_positions[n], s.bs_positions[m]));
            model.expansion_sq_dist[static_cast<size_t>(n) * n_flybs + m] = d * d;
        }

    const double alpha = s.radio.alpha_user;
    for (int n = 0; n < n_users; ++n) {
        const int b = s.serving[n];
        if (b < 0 || s.user_channel[n] < 0) continue;
        const double bw = plan.bandwidths[s.user_channel[n]];
        const double signal = user_link_power(s, n, b);
        const double d2_serv = std::pow(
            std::max(kMinLinkDistance, distance(s.user_positions[n], s.bs_positions[b])), 2.0);

        if (mode == ApproxMode::PaperLiteral) {
            // Taylor of both logs kills the interference terms; only the
            // serving link survives, expanded around psi^2 = current d^2.
            if (b < n_flybs)
                model.beta(n, b) -=
                    (bw / kLn2) * (alpha / 2.0) * (signal / d2_serv) / s.radio.noise_w;
            continue;
        }

        double interference = 0.0;
        for (int o = 0; o <= n_flybs; ++o) {
            if (o == b) continue;
            if (s.radio.interference == InterferenceMode::SameChannel &&
                !bs_uses_channel(s, plan, o, s.user_channel[n]))
                continue;
            interference += user_link_power(s, n, o);
        }
        const double denom_full = s.radio.noise_w + interference + signal;
        const double denom_interf = s.radio.noise_w + interference;

        if (b < n_flybs)
            model.beta(n, b) -= (bw / kLn2) * (alpha / 2.0) * (signal / d2_serv) / denom_full;
        for (int o = 0; o < n_flybs; ++o) {
            if (o == b) continue;
            if (s.radio.interference == InterferenceMode::SameChannel &&
                !bs_uses_channel(s, plan, o, s.user_channel[n]))
                continue;
            const double p = user_link_power(s, n, o);
            const double d2 = std::pow(
                std::max(kMinLinkDistance, distance(s.user_positions[n], s.bs_positions[o])), 2.0);
            model.beta(n, o) +=
                (bw / kLn2) * (alpha / 2.0) * (p / d2) * (1.0 / denom_interf - 1.0 / denom_full);
        }
    }
    return model;
}

RadialObjective build_radial(const LinearModel& model, const NetworkState& s) {
    const int n_users = s.num_users();
    const int n_flybs = s.num_flybs();

    RadialObjective r;
    r.per_flybs.resize(n_flybs);

    double constant = model.capacity_at_expansion;
    for (int n = 0; n < n_users; ++n)
        for (int m = 0; m < n_flybs; ++m)
            constant -= model.beta(n, m) *
                        model.expansion_sq_dist[static_cast<size_t>(n) * n_flybs + m];

    r.zeta = constant;
    for (int m = 0; m < n_flybs; ++m) {
        double coeff_sum = 0.0;
        double abs_sum = 0.0;
        Vec3 weighted = Vec3::Zero();
        double weighted_sq = 0.0;
        for (int n = 0; n < n_users; ++n) {
            const double b = model.beta(n, m);
            coeff_sum += b;
            abs_sum += std::abs(b);
            weighted += b * s.user_positions[n];
            weighted_sq += b * s.user_positions[n].squaredNorm();
        }
        RadialTerm& term = r.per_flybs[m];
        if (abs_sum == 0.0 || std::abs(coeff_sum) < 1e-12 * abs_sum) {
            // Coefficients cancel: the weighted sum of squares has no radial
            // form, so freeze this FlyBS at the expansion point.
            term.degenerate = true;
            term.rho = 0.0;
            term.attractor = s.bs_positions[m];
            for (int n = 0; n < n_users; ++n)
                r.zeta += model.beta(n, m) *
                          model.expansion_sq_dist[static_cast<size_t>(n) * n_flybs + m];
            continue;
        }
        term.rho = -coeff_sum;
        term.attractor = weighted / coeff_sum;
        r.zeta += weighted_sq - weighted.squaredNorm() / coeff_sum;
    }
    return r;
}

double radial_value(const RadialObjective& r, std::span<const Vec3> flybs_positions) {
    double value = r.zeta;
    for (size_t m = 0; m < r.per_flybs.size(); ++m) {
        const RadialTerm& term = r.per_flybs[m];
        if (term.degenerate) continue;
        value -= term.rho * (flybs_positions[m] - term.attractor).squaredNorm();
    }
    return value;
}

}  // namespace flybs
