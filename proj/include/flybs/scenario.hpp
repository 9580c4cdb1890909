#pragma once

#include "flybs/channel_plan.hpp"
#include "flybs/mobility.hpp"
#include "flybs/radial.hpp"
#include "flybs/state.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace flybs {

enum class Scheme { ThreeHop, TwoHop, Static };

struct RadioConfig {
    double total_bandwidth_hz = 100e6;
    int num_channels = 120;
    double direct_fraction = 0.2;  // share of channels serving users from relay and GBS
    double gbs_power_dbm = 37.0;
    double flybs_power_dbm = 30.0;
    double noise_dbm = -90.0;
    double alpha_user = 2.8;
    double alpha_bs = 2.1;
    // Composite reference gains at 1 m (carrier pathloss plus antennas) for
    // the two beam classes; they stand in for the antenna/frequency constant
    // the capacity formulas leave open.
    double user_gain_db = -50.0;
    double backhaul_gain_db = -40.0;
    double backhaul_rejection_db = 20.0;  // off-axis rejection of the backhaul antennas
};

struct FlightConfig {
    double h_min = 100.0;
    double h_max = 300.0;
    double vmax = 25.0;  // m/s
};

struct SolverConfig {
    double bisect_tol_m = 0.01;
    double geom_tol_m = 1e-6;
    int max_inner_iters = 10;
    // The chained-Taylor expansion keeps every FlyBS tracking the users it
    // serves; the exact-gradient mode is available for sensitivity studies
    // but lets interference repulsion strand users over long runs.
    ApproxMode approx_mode = ApproxMode::PaperLiteral;
    // Interference counts only transmitters active on the same channel; the
    // every-BS-everywhere reading is available as "full".
    InterferenceMode interference_mode = InterferenceMode::SameChannel;
    bool sequential_updates = false;
};

// Immutable run configuration; defaults reproduce the reference scenario
// (two 400 m areas 1600 m apart, 100 MHz over 120 channels, 37/30 dBm,
// -90 dBm noise, 100-300 m altitude band, 25 m/s FlyBSs).
struct Scenario {
    int n_users = 200;
    int m_flybss = 3;  // includes the relay
    int horizon = 1200;
    double delta = 1.0;
    RadioConfig radio;
    FlightConfig flight;
    Vec3 gbs_position = Vec3(0.0, 0.0, 25.0);
    MobilitySpec mobility;
    SolverConfig solver;
    Scheme scheme = Scheme::ThreeHop;
    std::uint64_t seed = 0;
};

// Validation failure with the offending field spelled out.
class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(std::string field, const std::string& reason)
        : std::runtime_error(field + ": " + reason), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

Scenario default_scenario();

// Parses a (possibly partial) JSON document on top of the defaults and
// validates every field. Throws ScenarioError on bad values and
// nlohmann::json exceptions on malformed documents.
Scenario load_scenario(const nlohmann::json& doc);
Scenario load_scenario_string(const std::string& text);
Scenario load_scenario_file(const std::string& path);

nlohmann::json scenario_to_json(const Scenario& sc);

void validate_scenario(const Scenario& sc);

ChannelPlan scenario_channel_plan(const Scenario& sc);
RadioContext scenario_radio_context(const Scenario& sc);

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

}  // namespace flybs
