#pragma once

#include "ridesim/emissions.hpp"
#include "ridesim/fleet_sim.hpp"
#include "ridesim/hotspots.hpp"
#include "ridesim/logbook_generator.hpp"
#include "ridesim/road_graph.hpp"
#include "ridesim/routing.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ridesim {

/// Everything a run needs, as read from a scenario JSON file. Relative paths
/// are resolved against the file's directory.
struct ScenarioFile {
    std::string network_path;
    std::string speed_profile_path;  // empty: uniform
    std::string hotspots_path;       // required for the hotspot strategy
    std::string logbook_path;        // a ready-made daily logbook
    std::string source_logbook_path; // historical logbook to draw days from
    std::string boundary_path;       // optional service-area polygon for the source
    std::string emission_table_path; // empty: built-in table

    TurnCostModel turn_model;
    Strategy strategy = Strategy::Return;
    LatLon pob{52.5285, 13.3532};
    double min_dwell_s = 30.0;
    double message_latency_s = 1.0;
    double hotspot_wait_probability = 0.2;
    std::uint64_t seed = 1;
    double wall_clock_budget_s = 120.0;
    std::string day = "wednesday";
    std::size_t fleet_size = 50;
    EmissionMode emission_mode = EmissionMode::TripMeanSpeed;
};

ScenarioFile parse_scenario(const std::string& json_text, const std::string& base_dir);
ScenarioFile load_scenario_file(const std::string& path);

/// Serialized with every value resolved; used in run manifests.
std::string scenario_to_json(const ScenarioFile& s, int indent = 2);

/// Shared, immutable inputs of a scenario.
struct ScenarioInputs {
    std::shared_ptr<const RoadGraph> graph; // turn model already applied
    SpeedProfile profile;
    std::shared_ptr<const HotspotSet> hotspots;
    EmissionFactorTable emission_table;
    std::vector<Shift> source_shifts; // in-area shifts of the source logbook
    std::size_t dismissed_shifts = 0;
    std::optional<SyntheticLogbook> fixed_logbook;
    std::vector<std::string> warnings;
};

/// Loads the network, profile, hotspots (when present or required), emission
/// table and logbook sources.
ScenarioInputs load_scenario_inputs(const ScenarioFile& s, bool need_hotspots);

ScenarioConfig make_config(const ScenarioFile& s, const ScenarioInputs& in, Strategy strategy, std::uint64_t seed);

/// The day's logbook: the fixed logbook if one is configured, else a draw
/// from the source shifts.
SyntheticLogbook logbook_for(const ScenarioFile& s, const ScenarioInputs& in, Weekday day, std::uint64_t seed);

} // namespace ridesim
