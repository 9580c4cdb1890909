#include "flybs/scenario.hpp"

#include <cmath>
#include <fstream>

namespace flybs {

using nlohmann::json;

Scenario default_scenario() {
    Scenario sc;
    sc.mobility.areas = {
        {Vec3(0.0, 0.0, 0.0), 400.0, 0.25},
        {Vec3(1600.0, 0.0, 0.0), 400.0, 0.75},
    };
    sc.mobility.walker_fraction = 0.5;
    sc.mobility.walker_speed = 1.0;
    sc.mobility.clusters = {
        {1.0, 0.6, 1.4, 3},
        {1.6, 1.2, 2.0, 3},
    };
    sc.mobility.step_delta = sc.delta;
    return sc;
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ThreeHop: return "three_hop";
        case Scheme::TwoHop: return "two_hop";
        case Scheme::Static: return "static";
    }
    return "three_hop";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "three_hop") return Scheme::ThreeHop;
    if (name == "two_hop") return Scheme::TwoHop;
    if (name == "static") return Scheme::Static;
    throw ScenarioError("scheme", "unknown scheme '" + name + "'");
}

namespace {

const char* approx_name(ApproxMode m) {
    return m == ApproxMode::Gradient ? "gradient" : "paper_literal";
}

ApproxMode approx_from_name(const std::string& name) {
    if (name == "gradient") return ApproxMode::Gradient;
    if (name == "paper_literal") return ApproxMode::PaperLiteral;
    throw ScenarioError("solver.approx_mode", "unknown mode '" + name + "'");
}

const char* interference_name(InterferenceMode m) {
    return m == InterferenceMode::Full ? "full" : "same_channel";
}

InterferenceMode interference_from_name(const std::string& name) {
    if (name == "full") return InterferenceMode::Full;
    if (name == "same_channel") return InterferenceMode::SameChannel;
    throw ScenarioError("solver.interference_mode", "unknown mode '" + name + "'");
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

Scenario load_scenario(const json& doc) {
    Scenario sc = default_scenario();

    read_into(doc, "n_users", sc.n_users);
    read_into(doc, "m_flybss", sc.m_flybss);
    read_into(doc, "horizon", sc.horizon);
    read_into(doc, "delta", sc.delta);
    read_into(doc, "seed", sc.seed);
    if (doc.contains("scheme")) sc.scheme = scheme_from_name(doc.at("scheme").get<std::string>());

    if (doc.contains("radio")) {
        const json& r = doc.at("radio");
        read_into(r, "total_bandwidth_hz", sc.radio.total_bandwidth_hz);
        read_into(r, "num_channels", sc.radio.num_channels);
        read_into(r, "direct_fraction", sc.radio.direct_fraction);
        read_into(r, "gbs_power_dbm", sc.radio.gbs_power_dbm);
        read_into(r, "flybs_power_dbm", sc.radio.flybs_power_dbm);
        read_into(r, "noise_dbm", sc.radio.noise_dbm);
        read_into(r, "alpha_user", sc.radio.alpha_user);
        read_into(r, "alpha_bs", sc.radio.alpha_bs);
        read_into(r, "user_gain_db", sc.radio.user_gain_db);
        read_into(r, "backhaul_gain_db", sc.radio.backhaul_gain_db);
        read_into(r, "backhaul_rejection_db", sc.radio.backhaul_rejection_db);
    }
    if (doc.contains("flight")) {
        const json& f = doc.at("flight");
        read_into(f, "h_min", sc.flight.h_min);
        read_into(f, "h_max", sc.flight.h_max);
        read_into(f, "vmax", sc.flight.vmax);
    }
    if (doc.contains("gbs")) {
        const json& g = doc.at("gbs");
        sc.gbs_position = Vec3(g.value("x", sc.gbs_position.x()), g.value("y", sc.gbs_position.y()),
                               g.value("z", sc.gbs_position.z()));
    }
    if (doc.contains("mobility")) {
        const json& m = doc.at("mobility");
        if (m.contains("areas")) {
            sc.mobility.areas.clear();
            for (const json& a : m.at("areas")) {
                AreaSpec area;
                area.center = Vec3(a.value("cx", 0.0), a.value("cy", 0.0), 0.0);
                area.radius = a.value("radius", 400.0);
                area.user_fraction = a.value("fraction", 0.0);
                sc.mobility.areas.push_back(area);
            }
        }
        read_into(m, "walker_fraction", sc.mobility.walker_fraction);
        read_into(m, "walker_speed", sc.mobility.walker_speed);
        if (m.contains("clusters")) {
            sc.mobility.clusters.clear();
            for (const json& c : m.at("clusters")) {
                ClusterSpec cs;
                cs.center_speed = c.value("center_speed", 1.0);
                if (c.contains("member_speed")) {
                    cs.member_speed_min = c.at("member_speed").at(0).get<double>();
                    cs.member_speed_max = c.at("member_speed").at(1).get<double>();
                }
                cs.count = c.value("count", 0);
                sc.mobility.clusters.push_back(cs);
            }
        }
    }
    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        read_into(s, "bisect_tol_m", sc.solver.bisect_tol_m);
        read_into(s, "geom_tol_m", sc.solver.geom_tol_m);
        read_into(s, "max_inner_iters", sc.solver.max_inner_iters);
        if (s.contains("approx_mode"))
            sc.solver.approx_mode = approx_from_name(s.at("approx_mode").get<std::string>());
        if (s.contains("interference_mode"))
            sc.solver.interference_mode =
                interference_from_name(s.at("interference_mode").get<std::string>());
        read_into(s, "sequential_updates", sc.solver.sequential_updates);
    }

    sc.mobility.step_delta = sc.delta;
    validate_scenario(sc);
    return sc;
}

Scenario load_scenario_string(const std::string& text) {
    return load_scenario(json::parse(text));
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    json doc;
    in >> doc;
    return load_scenario(doc);
}

void validate_scenario(const Scenario& sc) {
    if (sc.n_users <= 0) throw ScenarioError("n_users", "must be positive");
    if (sc.m_flybss < 2) throw ScenarioError("m_flybss", "need a relay plus at least one access FlyBS");
    if (sc.horizon < 0) throw ScenarioError("horizon", "must be non-negative");
    if (!(sc.delta > 0.0)) throw ScenarioError("delta", "must be positive");
    if (!(sc.radio.total_bandwidth_hz > 0.0))
        throw ScenarioError("radio.total_bandwidth_hz", "must be positive");
    if (sc.radio.num_channels <= 0) throw ScenarioError("radio.num_channels", "must be positive");
    if (sc.radio.direct_fraction < 0.0 || sc.radio.direct_fraction >= 1.0)
        throw ScenarioError("radio.direct_fraction", "must lie in [0, 1)");
    if (!(sc.radio.alpha_user >= 1.0)) throw ScenarioError("radio.alpha_user", "must be >= 1");
    if (!(sc.radio.alpha_bs >= 1.0)) throw ScenarioError("radio.alpha_bs", "must be >= 1");
    if (sc.radio.backhaul_rejection_db < 0.0)
        throw ScenarioError("radio.backhaul_rejection_db", "must be non-negative");

    if (sc.flight.h_min > sc.flight.h_max)
        throw ScenarioError("flight.h_min", "must not exceed flight.h_max");
    if (!(sc.flight.h_min > 0.0)) throw ScenarioError("flight.h_min", "must be positive");
    if (sc.flight.vmax < 0.0) throw ScenarioError("flight.vmax", "must be non-negative");
    if (sc.mobility.areas.empty()) throw ScenarioError("mobility.areas", "need at least one area");
    double fraction_sum = 0.0;
    for (size_t a = 0; a < sc.mobility.areas.size(); ++a) {
        const AreaSpec& area = sc.mobility.areas[a];
        const std::string field = "mobility.areas[" + std::to_string(a) + "]";
        if (!(area.radius > 0.0)) throw ScenarioError(field + ".radius", "must be positive");
        if (area.user_fraction < 0.0 || area.user_fraction > 1.0)
            throw ScenarioError(field + ".fraction", "must lie in [0, 1]");
        fraction_sum += area.user_fraction;
    }
    if (std::abs(fraction_sum - 1.0) > 1e-9)
        throw ScenarioError("mobility.areas", "user fractions must sum to 1");
    if (sc.mobility.walker_fraction < 0.0 || sc.mobility.walker_fraction > 1.0)
        throw ScenarioError("mobility.walker_fraction", "must lie in [0, 1]");
    if (sc.mobility.walker_speed < 0.0)
        throw ScenarioError("mobility.walker_speed", "must be non-negative");
    for (size_t c = 0; c < sc.mobility.clusters.size(); ++c) {
        const ClusterSpec& cs = sc.mobility.clusters[c];
        const std::string field = "mobility.clusters[" + std::to_string(c) + "]";
        if (cs.center_speed < 0.0) throw ScenarioError(field + ".center_speed", "must be >= 0");
        if (cs.member_speed_min < 0.0 || cs.member_speed_max < cs.member_speed_min)
            throw ScenarioError(field + ".member_speed", "range must be non-negative and ordered");
        if (cs.count < 0) throw ScenarioError(field + ".count", "must be >= 0");
    }
    if (!(sc.solver.bisect_tol_m > 0.0))
        throw ScenarioError("solver.bisect_tol_m", "must be positive");
    if (!(sc.solver.geom_tol_m > 0.0)) throw ScenarioError("solver.geom_tol_m", "must be positive");
    if (sc.solver.max_inner_iters < 1)
        throw ScenarioError("solver.max_inner_iters", "must be at least 1");
}

json scenario_to_json(const Scenario& sc) {
    json areas = json::array();
    for (const AreaSpec& a : sc.mobility.areas)
        areas.push_back({{"cx", a.center.x()},
                         {"cy", a.center.y()},
                         {"radius", a.radius},
                         {"fraction", a.user_fraction}});
    json clusters = json::array();
    for (const ClusterSpec& c : sc.mobility.clusters)
        clusters.push_back({{"center_speed", c.center_speed},
                            {"member_speed", {c.member_speed_min, c.member_speed_max}},
                            {"count", c.count}});
    return json{
        {"n_users", sc.n_users},
        {"m_flybss", sc.m_flybss},
        {"horizon", sc.horizon},
        {"delta", sc.delta},
        {"seed", sc.seed},
        {"scheme", scheme_name(sc.scheme)},
        {"radio",
         {{"total_bandwidth_hz", sc.radio.total_bandwidth_hz},
          {"num_channels", sc.radio.num_channels},
          {"direct_fraction", sc.radio.direct_fraction},
          {"gbs_power_dbm", sc.radio.gbs_power_dbm},
          {"flybs_power_dbm", sc.radio.flybs_power_dbm},
          {"noise_dbm", sc.radio.noise_dbm},
          {"alpha_user", sc.radio.alpha_user},
          {"alpha_bs", sc.radio.alpha_bs},
          {"user_gain_db", sc.radio.user_gain_db},
          {"backhaul_gain_db", sc.radio.backhaul_gain_db},
          {"backhaul_rejection_db", sc.radio.backhaul_rejection_db}}},
        {"flight", {{"h_min", sc.flight.h_min}, {"h_max", sc.flight.h_max}, {"vmax", sc.flight.vmax}}},
        {"gbs", {{"x", sc.gbs_position.x()}, {"y", sc.gbs_position.y()}, {"z", sc.gbs_position.z()}}},
        {"mobility",
         {{"areas", areas},
          {"walker_fraction", sc.mobility.walker_fraction},
          {"walker_speed", sc.mobility.walker_speed},
          {"clusters", clusters}}},
        {"solver",
         {{"bisect_tol_m", sc.solver.bisect_tol_m},
          {"geom_tol_m", sc.solver.geom_tol_m},
          {"max_inner_iters", sc.solver.max_inner_iters},
          {"approx_mode", approx_name(sc.solver.approx_mode)},
          {"interference_mode", interference_name(sc.solver.interference_mode)},
          {"sequential_updates", sc.solver.sequential_updates}}},
    };
}

ChannelPlan scenario_channel_plan(const Scenario& sc) {
    return make_channel_plan(sc.radio.num_channels, sc.radio.total_bandwidth_hz,
                             sc.radio.direct_fraction, sc.m_flybss);
}

RadioContext scenario_radio_context(const Scenario& sc) {
    RadioContext radio;
    radio.gbs_tx_w = dbm_to_watt(sc.radio.gbs_power_dbm);
    radio.flybs_tx_w = dbm_to_watt(sc.radio.flybs_power_dbm);
    radio.alpha_user = sc.radio.alpha_user;
    radio.alpha_bs = sc.radio.alpha_bs;
    radio.user_gain = db_to_linear(sc.radio.user_gain_db);
    radio.backhaul_gain = db_to_linear(sc.radio.backhaul_gain_db);
    radio.offaxis_rejection = db_to_linear(-sc.radio.backhaul_rejection_db);
    radio.noise_w = dbm_to_watt(sc.radio.noise_dbm);
    radio.interference = sc.solver.interference_mode;
    return radio;
}

}  // namespace flybs
