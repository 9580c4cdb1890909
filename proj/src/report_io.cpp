#include "flybs/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace flybs {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_steps_csv(const std::string& path, const std::vector<StepReport>& reports) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "step,sum_capacity_bps,mean_user_capacity_bps,associated_users,"
           "backhaul_margin_access_min,backhaul_margin_gbs,flags,inner_iters\n";
    for (const StepReport& r : reports) {
        double access_min = std::numeric_limits<double>::infinity();
        for (double m : r.access_backhaul_margin) access_min = std::min(access_min, m);
        out << r.time_step << ',' << fmt_double(r.sum_capacity) << ','
            << fmt_double(r.mean_user_capacity) << ',' << r.associated_users << ','
            << fmt_double(access_min) << ',' << fmt_double(r.gbs_backhaul_margin) << ','
            << flag_names(r.flags) << ',' << r.inner_iterations << '\n';
    }
}

void write_trajectories_csv(const std::string& path,
                            const std::vector<std::vector<Vec3>>& steps) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    // %.17g keeps doubles bit-exact across the round trip, so a replayed
    // run reproduces the original checksum.
    auto exact = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "step,user_id,x,y,z\n";
    for (size_t k = 0; k < steps.size(); ++k)
        for (size_t n = 0; n < steps[k].size(); ++n)
            out << k << ',' << n << ',' << exact(steps[k][n].x()) << ','
                << exact(steps[k][n].y()) << ',' << exact(steps[k][n].z()) << '\n';
}

std::vector<std::vector<Vec3>> read_trajectories_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::vector<std::vector<Vec3>> steps;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        size_t step, user;
        double x, y, z;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf,%lf", &step, &user, &x, &y, &z) != 5)
            throw std::runtime_error("malformed trajectory row: " + line);
        if (steps.size() <= step) steps.resize(step + 1);
        if (steps[step].size() <= user) steps[step].resize(user + 1, Vec3::Zero());
        steps[step][user] = Vec3(x, y, z);
    }
    return steps;
}

}  // namespace flybs
