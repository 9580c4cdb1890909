#include "flybs/engine.hpp"
#include "flybs/report_io.hpp"
#include "flybs/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace flybs;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const std::uint64_t lo = std::stoull(text.substr(0, dots));
        const std::uint64_t hi = std::stoull(text.substr(dots + 2));
        if (hi < lo) throw CLI::ValidationError("--seeds", "range end before start");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::string token;
    for (std::istringstream ss(text); std::getline(ss, token, ',');)
        if (!token.empty()) seeds.push_back(std::stoull(token));
    if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
    return seeds;
}

Scenario load_base_scenario(const std::string& path) {
    Scenario sc = path.empty() ? default_scenario() : load_scenario_file(path);
    if (const char* env_seed = std::getenv("FLYBS_SEED")) sc.seed = std::stoull(env_seed);
    return sc;
}

std::string out_dir_or_env(const std::string& flag_value) {
    if (const char* env = std::getenv("FLYBS_OUT"); env && flag_value == "out") return env;
    return flag_value;
}

json summarize(const Scenario& sc, const RunResult& result, double runtime_s) {
    std::map<std::string, int> flag_counts{{"backhaul_limited", 0}, {"max_iters_hit", 0},
                                           {"region_empty", 0}};
    int altitude = 0, speed = 0, association = 0, backhaul_unflagged = 0;
    for (const StepReport& r : result.reports) {
        if (r.flags & kFlagBackhaulLimited) ++flag_counts["backhaul_limited"];
        if (r.flags & kFlagMaxItersHit) ++flag_counts["max_iters_hit"];
        if (r.flags & kFlagRegionEmpty) ++flag_counts["region_empty"];
        altitude += r.altitude_violations;
        speed += r.speed_violations;
        association += r.association_violations;
        if (r.flags == 0 && !r.backhaul_satisfied) ++backhaul_unflagged;
    }
    return json{
        {"scheme", scheme_name(sc.scheme)},
        {"seed", sc.seed},
        {"horizon", sc.horizon},
        {"n_users", sc.n_users},
        {"m_flybss", sc.m_flybss},
        {"time_avg_sum_capacity_bps", result.time_avg_sum_capacity},
        {"time_avg_user_capacity_bps", result.time_avg_user_capacity},
        {"trajectory_checksum", result.trajectory_checksum},
        {"flag_counts", flag_counts},
        {"violations",
         {{"altitude", altitude},
          {"speed", speed},
          {"association", association},
          {"backhaul_unflagged", backhaul_unflagged}}},
        {"runtime_s", runtime_s},
    };
}

struct CellResult {
    bool ok = false;
    std::string error;
    double time_avg_sum = 0.0;
    double time_avg_user = 0.0;
    std::uint64_t checksum = 0;
};

// Runs every scenario in `cells` on a small worker pool; results keep the
// cell order regardless of scheduling.
std::vector<CellResult> run_cells(const std::vector<Scenario>& cells, int jobs) {
    std::vector<CellResult> results(cells.size());
    std::atomic<size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    auto worker = [&]() {
        for (size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            try {
                const RunResult run = run_simulation(cells[i]);
                results[i].ok = true;
                results[i].time_avg_sum = run.time_avg_sum_capacity;
                results[i].time_avg_user = run.time_avg_user_capacity;
                results[i].checksum = run.trajectory_checksum;
            } catch (const std::exception& e) {
                results[i].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return results;
}

struct Moments {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

Moments moments(const std::vector<double>& xs) {
    Moments m;
    m.count = static_cast<int>(xs.size());
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= xs.size();
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.stddev = std::sqrt(ss / (xs.size() - 1));
    }
    return m;
}

int cmd_run(const std::string& scenario_path, const std::string& out_flag,
            const std::string& scheme_override, std::optional<std::uint64_t> seed_override,
            const std::string& trajectories_out, const std::string& trajectories_in) {
    Scenario sc = load_base_scenario(scenario_path);
    if (!scheme_override.empty()) sc.scheme = scheme_from_name(scheme_override);
    if (seed_override) sc.seed = *seed_override;

    const fs::path out_dir = out_dir_or_env(out_flag);
    fs::create_directories(out_dir);

    std::vector<std::vector<Vec3>> replay;
    if (!trajectories_in.empty()) {
        replay = read_trajectories_csv(trajectories_in);
        if (static_cast<int>(replay.size()) < sc.horizon + 1)
            throw std::runtime_error("trajectory file shorter than the scenario horizon");
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunResult result;
    std::vector<std::vector<Vec3>> recorded;
    {
        Simulation sim(sc, trajectories_in.empty() ? nullptr : &replay[0]);
        if (!trajectories_out.empty()) recorded.push_back(sim.state().user_positions);
        result.reports.reserve(sc.horizon);
        for (int k = 0; k < sc.horizon; ++k) {
            result.reports.push_back(trajectories_in.empty() ? sim.step()
                                                             : sim.step(replay[k + 1]));
            if (!trajectories_out.empty()) recorded.push_back(sim.state().user_positions);
        }
        result.trajectory_checksum = sim.trajectory_checksum();
        for (const StepReport& r : result.reports) {
            result.time_avg_sum_capacity += r.sum_capacity;
            result.time_avg_user_capacity += r.mean_user_capacity;
        }
        if (!result.reports.empty()) {
            result.time_avg_sum_capacity /= static_cast<double>(result.reports.size());
            result.time_avg_user_capacity /= static_cast<double>(result.reports.size());
        }
    }
    const double runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!trajectories_out.empty())
        write_trajectories_csv((out_dir / trajectories_out).string(), recorded);

    write_steps_csv((out_dir / "steps.csv").string(), result.reports);
    std::ofstream summary(out_dir / "summary.json");
    summary << summarize(sc, result, runtime_s).dump(2) << '\n';

    std::cout << "scheme=" << scheme_name(sc.scheme) << " seed=" << sc.seed
              << " steps=" << result.reports.size()
              << " time_avg_sum_capacity_bps=" << fmt_double(result.time_avg_sum_capacity)
              << " runtime_s=" << fmt_double(runtime_s) << '\n';
    return 0;
}

int cmd_sweep(const std::string& scenario_path, const std::string& out_flag,
              const std::string& axis, const std::vector<int>& values,
              const std::string& seeds_text, std::vector<std::string> schemes, int jobs) {
    if (axis != "n_users" && axis != "m_flybss")
        throw CLI::ValidationError("--axis", "must be n_users or m_flybss");
    const Scenario base = load_base_scenario(scenario_path);
    const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
    if (schemes.empty()) schemes = {scheme_name(base.scheme)};

    std::vector<Scenario> cells;
    for (const std::string& scheme : schemes)
        for (int value : values)
            for (std::uint64_t seed : seeds) {
                Scenario sc = base;
                sc.scheme = scheme_from_name(scheme);
                sc.seed = seed;
                if (axis == "n_users")
                    sc.n_users = value;
                else
                    sc.m_flybss = value;
                validate_scenario(sc);
                cells.push_back(sc);
            }

    const std::vector<CellResult> results = run_cells(cells, jobs);

    const fs::path out_dir = out_dir_or_env(out_flag);
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "sweep.csv");
    out << "axis,value,scheme,seeds,ok_cells,mean_sum_capacity_bps,std_sum_capacity_bps,"
           "mean_user_capacity_bps,std_user_capacity_bps,status\n";

    size_t idx = 0;
    bool any_failed = false;
    for (const std::string& scheme : schemes)
        for (int value : values) {
            std::vector<double> sums, users;
            for (size_t s = 0; s < seeds.size(); ++s, ++idx) {
                if (results[idx].ok) {
                    sums.push_back(results[idx].time_avg_sum);
                    users.push_back(results[idx].time_avg_user);
                } else {
                    any_failed = true;
                    std::cerr << "cell failed (scheme=" << scheme << " value=" << value
                              << " seed=" << seeds[s] << "): " << results[idx].error << '\n';
                }
            }
            const Moments ms = moments(sums);
            const Moments mu = moments(users);
            const std::string status =
                ms.count == static_cast<int>(seeds.size()) ? "ok" : "partial";
            out << axis << ',' << value << ',' << scheme << ',' << seeds.size() << ','
                << ms.count << ',' << fmt_double(ms.mean) << ',' << fmt_double(ms.stddev) << ','
                << fmt_double(mu.mean) << ',' << fmt_double(mu.stddev) << ',' << status << '\n';
        }
    std::cout << "sweep written to " << (out_dir / "sweep.csv").string() << '\n';
    return any_failed ? 1 : 0;
}

int cmd_compare(const std::string& scenario_path, const std::string& out_flag,
                std::vector<std::string> schemes, const std::string& seeds_text, int jobs) {
    if (schemes.empty()) schemes = {"three_hop", "two_hop"};
    if (schemes.size() < 2) throw CLI::ValidationError("--scheme", "need at least two schemes");
    const Scenario base = load_base_scenario(scenario_path);
    const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);

    std::vector<Scenario> cells;
    for (const std::string& scheme : schemes)
        for (std::uint64_t seed : seeds) {
            Scenario sc = base;
            sc.scheme = scheme_from_name(scheme);
            sc.seed = seed;
            cells.push_back(sc);
        }
    const std::vector<CellResult> results = run_cells(cells, jobs);
    for (const CellResult& r : results)
        if (!r.ok) {
            std::cerr << "compare cell failed: " << r.error << '\n';
            return 1;
        }

    auto cell = [&](size_t scheme_idx, size_t seed_idx) -> const CellResult& {
        return results[scheme_idx * seeds.size() + seed_idx];
    };

    // Paired comparison is only meaningful over identical user trajectories.
    bool trajectories_match = true;
    for (size_t s = 0; s < seeds.size(); ++s)
        for (size_t i = 1; i < schemes.size(); ++i)
            if (cell(i, s).checksum != cell(0, s).checksum) trajectories_match = false;

    const fs::path out_dir = out_dir_or_env(out_flag);
    fs::create_directories(out_dir);
    std::ofstream out(out_dir / "compare.csv");
    out << "scheme_a,scheme_b,seeds,mean_gain_pct,std_gain_pct,ci95_lo_pct,ci95_hi_pct,"
           "trajectories_match\n";
    for (size_t i = 0; i < schemes.size(); ++i)
        for (size_t j = 0; j < schemes.size(); ++j) {
            if (i == j) continue;
            std::vector<double> gains;
            for (size_t s = 0; s < seeds.size(); ++s) {
                const double a = cell(i, s).time_avg_sum;
                const double b = cell(j, s).time_avg_sum;
                gains.push_back(b > 0.0 ? 100.0 * (a - b) / b : 0.0);
            }
            const Moments m = moments(gains);
            const double half = m.count > 0 ? 1.96 * m.stddev / std::sqrt(double(m.count)) : 0.0;
            out << schemes[i] << ',' << schemes[j] << ',' << seeds.size() << ','
                << fmt_double(m.mean) << ',' << fmt_double(m.stddev) << ','
                << fmt_double(m.mean - half) << ',' << fmt_double(m.mean + half) << ','
                << (trajectories_match ? "yes" : "no") << '\n';
            std::cout << schemes[i] << " vs " << schemes[j] << ": mean gain " << fmt_double(m.mean)
                      << "% over " << seeds.size() << " seeds\n";
        }
    return trajectories_match ? 0 : 1;
}

int cmd_validate(const std::string& scenario_path) {
    const Scenario sc = load_base_scenario(scenario_path);
    std::cout << scenario_to_json(sc).dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-hop FlyBS network simulator and positioning optimizer"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string seeds_text = "0..9";
    std::string axis = "n_users";
    std::vector<int> values;
    std::vector<std::string> schemes;
    std::string scheme_override;
    std::optional<std::uint64_t> seed_override;
    std::string trajectories_out, trajectories_in;
    int jobs = std::max(1u, std::thread::hardware_concurrency());

    CLI::App* run = app.add_subcommand("run", "Run a single scenario and persist metrics");
    run->add_option("--scenario", scenario_path, "Scenario JSON path (defaults when omitted)");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--scheme", scheme_override, "Override the scenario scheme");
    run->add_option("--seed", seed_override, "Override the scenario seed");
    run->add_option("--trajectories-out", trajectories_out,
                    "Export user trajectories (CSV file name inside --out)");
    run->add_option("--trajectories-in", trajectories_in,
                    "Replay user trajectories from a CSV instead of the mobility model");

    CLI::App* sweep = app.add_subcommand("sweep", "Sweep n_users or m_flybss over seeds");
    sweep->add_option("--scenario", scenario_path, "Scenario JSON path");
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--axis", axis, "Sweep axis: n_users or m_flybss");
    sweep->add_option("--values", values, "Axis values")->required()->delimiter(',');
    sweep->add_option("--seeds", seeds_text, "Seeds, e.g. 0..9 or 1,2,3");
    sweep->add_option("--scheme", schemes, "Scheme(s) to sweep")->delimiter(',');
    sweep->add_option("--jobs", jobs, "Parallel worker count");

    CLI::App* compare = app.add_subcommand("compare", "Compare schemes on shared trajectories");
    compare->add_option("--scenario", scenario_path, "Scenario JSON path");
    compare->add_option("--out", out_dir, "Output directory");
    compare->add_option("--scheme", schemes, "Schemes to compare")->delimiter(',');
    compare->add_option("--seeds", seeds_text, "Seeds, e.g. 0..9");
    compare->add_option("--jobs", jobs, "Parallel worker count");

    CLI::App* validate = app.add_subcommand("validate", "Validate and echo a scenario");
    validate->add_option("--scenario", scenario_path, "Scenario JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(scenario_path, out_dir, scheme_override, seed_override,
                           trajectories_out, trajectories_in);
        if (sweep->parsed())
            return cmd_sweep(scenario_path, out_dir, axis, values, seeds_text, schemes, jobs);
        if (compare->parsed())
            return cmd_compare(scenario_path, out_dir, schemes, seeds_text, jobs);
        if (validate->parsed()) return cmd_validate(scenario_path);
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
