#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace flybs {

using Vec3 = Eigen::Vector3d;

// Link distances below this floor are treated as 1 m to keep powers finite.
inline constexpr double kMinLinkDistance = 1.0;

enum class NodeKind { User, AccessFlyBs, Relay, Gbs };

struct NodeId {
    NodeKind kind = NodeKind::User;
    int index = 0;
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Deterministic, platform-independent random stream (splitmix64 core).
// One stream per worker; streams are never shared between threads.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller, one spare cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // uniform point in a disk of given radius around the origin (z = 0)
    Vec3 disk_point(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double theta = 2.0 * M_PI * uniform();
        return {r * std::cos(theta), r * std::sin(theta), 0.0};
    }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace flybs
