#pragma once

#include "flybs/types.hpp"

namespace flybs {

enum class FadingMode { Expected, Sampled };

// Per-link radio parameters. gamma_coeff bundles transmit power, antenna
// gains and carrier-frequency effects into a single power coefficient at
// the 1 m reference distance.
struct LinkParams {
    double gamma_coeff = 1.0;
    double rician_k = 10.0;
    double pathloss_exp = 2.0;
    FadingMode fading = FadingMode::Expected;
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

// Rician channel power coefficient. Expected mode returns the mean power
// gain gamma_coeff exactly; sampled mode draws the NLoS term from CN(0,1)
// and mixes it with the unit LoS component using amplitude weights
// sqrt(k/(k+1)) and sqrt(1/(k+1)), so the sample mean is gamma_coeff.
inline double channel_gain(const LinkParams& p, RandomStream* rng = nullptr) {
    if (p.fading == FadingMode::Expected || rng == nullptr) return p.gamma_coeff;
    const double a = std::sqrt(p.rician_k / (p.rician_k + 1.0));
    const double b = std::sqrt(1.0 / (p.rician_k + 1.0));
    // CN(0,1): real and imaginary parts N(0, 1/2)
    const double re = a + b * rng->normal() * M_SQRT1_2;
    const double im = b * rng->normal() * M_SQRT1_2;
    return p.gamma_coeff * (re * re + im * im);
}

// Received power Q * d^-alpha.
inline double received_power(double q_coeff, double d, double alpha) {
    if (d <= 0.0) throw std::domain_error("received_power: collocated nodes (d <= 0)");
    return q_coeff * std::pow(d, -alpha);
}

}  // namespace flybs
