#include "ridesim/scenario_config.hpp"

#include "ridesim/error.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace ridesim {

using nlohmann::json;

namespace {

std::string resolve(const std::string& base, const std::string& p)
{
    if (p.empty()) {
        return p;
    }
    const std::filesystem::path path(p);
    if (path.is_absolute() || base.empty()) {
        return path.lexically_normal().string();
    }
    return (std::filesystem::path(base) / path).lexically_normal().string();
}

std::string read_file(const std::string& path, const char* what)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(std::string("cannot open ") + what + " " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ScenarioFile parse_scenario(const std::string& json_text, const std::string& base_dir)
{
    ScenarioFile s;
    try {
        const json j = json::parse(json_text);
        const auto path = [&](const char* key) { return resolve(base_dir, j.value(key, std::string())); };
        s.network_path = path("network");
        s.speed_profile_path = path("speed_profile");
        s.hotspots_path = path("hotspots");
        s.logbook_path = path("logbook");
        s.source_logbook_path = path("source_logbook");
        s.boundary_path = path("boundary");
        s.emission_table_path = path("emission_table");
        if (j.contains("turn_costs")) {
            const auto& t = j.at("turn_costs");
            s.turn_model.straight_s = t.value("straight_s", s.turn_model.straight_s);
            s.turn_model.right_s = t.value("right_s", s.turn_model.right_s);
            s.turn_model.left_s = t.value("left_s", s.turn_model.left_s);
            s.turn_model.uturn_s = t.value("uturn_s", s.turn_model.uturn_s);
        }
        if (j.contains("strategy")) {
            const auto st = parse_strategy(j.at("strategy").get<std::string>());
            if (!st) {
                throw ConfigError("scenario: unknown strategy " + j.at("strategy").dump());
            }
            s.strategy = *st;
        }
        if (j.contains("pob")) {
            s.pob = {j.at("pob").at("lat").get<double>(), j.at("pob").at("lon").get<double>()};
        }
        s.min_dwell_s = j.value("min_dwell_s", s.min_dwell_s);
        s.message_latency_s = j.value("message_latency_s", s.message_latency_s);
        s.hotspot_wait_probability = j.value("hotspot_wait_probability", s.hotspot_wait_probability);
        s.seed = j.value("seed", s.seed);
        s.wall_clock_budget_s = j.value("wall_clock_budget_s", s.wall_clock_budget_s);
        s.day = j.value("day", s.day);
        s.fleet_size = j.value("fleet_size", s.fleet_size);
        const std::string mode = j.value("emission_mode", std::string("trip"));
        if (mode == "trip") {
            s.emission_mode = EmissionMode::TripMeanSpeed;
        } else if (mode == "edge") {
            s.emission_mode = EmissionMode::PerEdge;
        } else {
            throw ConfigError("scenario: emission_mode must be 'trip' or 'edge'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    if (s.network_path.empty()) {
        throw ConfigError("scenario: 'network' is required");
    }
    if (!parse_weekday(s.day)) {
        throw ConfigError("scenario: unknown day '" + s.day + "'");
    }
    return s;
}

ScenarioFile load_scenario_file(const std::string& path)
{
    const std::string base = std::filesystem::path(path).parent_path().string();
    return parse_scenario(read_file(path, "scenario"), base);
}

std::string scenario_to_json(const ScenarioFile& s, int indent)
{
    json j;
    j["network"] = s.network_path;
    j["speed_profile"] = s.speed_profile_path;
    j["hotspots"] = s.hotspots_path;
    j["logbook"] = s.logbook_path;
    j["source_logbook"] = s.source_logbook_path;
    j["boundary"] = s.boundary_path;
    j["emission_table"] = s.emission_table_path;
    j["turn_costs"] = {{"straight_s", s.turn_model.straight_s},
                       {"right_s", s.turn_model.right_s},
                       {"left_s", s.turn_model.left_s},
                       {"uturn_s", s.turn_model.uturn_s}};
    j["strategy"] = std::string(strategy_name(s.strategy));
    j["pob"] = {{"lat", s.pob.lat}, {"lon", s.pob.lon}};
    j["min_dwell_s"] = s.min_dwell_s;
    j["message_latency_s"] = s.message_latency_s;
    j["hotspot_wait_probability"] = s.hotspot_wait_probability;
    j["seed"] = s.seed;
    j["wall_clock_budget_s"] = s.wall_clock_budget_s;
    j["day"] = s.day;
    j["fleet_size"] = s.fleet_size;
    j["emission_mode"] = s.emission_mode == EmissionMode::PerEdge ? "edge" : "trip";
    return j.dump(indent);
}

ScenarioInputs load_scenario_inputs(const ScenarioFile& s, bool need_hotspots)
{
    ScenarioInputs in;
    const RoadGraph raw = load_network(s.network_path);
    if (raw.component_count() > 1) {
        in.warnings.push_back("network has " + std::to_string(raw.component_count()) + " weakly connected components");
    }
    in.graph = std::make_shared<const RoadGraph>(raw.with_turn_model(s.turn_model));
    if (!s.speed_profile_path.empty()) {
        in.profile = load_speed_profile(s.speed_profile_path);
    }
    if (!s.hotspots_path.empty() && (need_hotspots || std::filesystem::exists(s.hotspots_path))) {
        in.hotspots = std::make_shared<const HotspotSet>(load_hotspots(s.hotspots_path));
    } else if (need_hotspots) {
        throw ConfigError("hotspot strategy requires 'hotspots' in the scenario");
    }
    in.emission_table =
        s.emission_table_path.empty() ? default_factor_table() : load_factor_table(s.emission_table_path);

    if (!s.logbook_path.empty()) {
        auto parsed = parse_logbook(s.logbook_path);
        for (const auto& r : parsed.rejected) {
            in.warnings.push_back(s.logbook_path + ": line " + std::to_string(r.line) + " rejected: " + r.reason);
        }
        in.fixed_logbook = logbook_from_orders(parsed.orders);
    } else if (!s.source_logbook_path.empty()) {
        auto parsed = parse_logbook(s.source_logbook_path);
        if (!parsed.rejected.empty()) {
            in.warnings.push_back(s.source_logbook_path + ": " + std::to_string(parsed.rejected.size()) +
                                  " rows rejected");
        }
        auto shifts = extract_shifts(parsed.orders);
        if (!s.boundary_path.empty()) {
            auto filtered = filter_out_of_area(shifts, load_polygon(s.boundary_path));
            in.dismissed_shifts = filtered.dismissed.size();
            shifts = std::move(filtered.kept);
        }
        in.source_shifts = std::move(shifts);
    } else {
        throw ConfigError("scenario needs 'logbook' or 'source_logbook'");
    }
    return in;
}

ScenarioConfig make_config(const ScenarioFile& s, const ScenarioInputs& in, Strategy strategy, std::uint64_t seed)
{
    ScenarioConfig c;
    c.strategy = strategy;
    c.pob = s.pob;
    c.min_dwell_s = s.min_dwell_s;
    c.message_latency_s = s.message_latency_s;
    c.hotspot_wait_probability = s.hotspot_wait_probability;
    c.seed = seed;
    c.profile = in.profile;
    c.hotspots = in.hotspots;
    c.wall_clock_budget_s = s.wall_clock_budget_s;
    c.validate();
    return c;
}

SyntheticLogbook logbook_for(const ScenarioFile& s, const ScenarioInputs& in, Weekday day, std::uint64_t seed)
{
    if (in.fixed_logbook) {
        return *in.fixed_logbook;
    }
    return generate_logbook(in.source_shifts, day, s.fleet_size, seed);
}

} // namespace ridesim
