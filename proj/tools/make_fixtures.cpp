// Writes the bundled synthetic scenario into a directory:
//
//   mini_berlin.json         20x20 grid network
//   boundary.geojson         service area
//   demand.json              demand parameters used for the year
//   source_logbook.csv       one synthetic operator year
//   logbook_500.csv          first 500 rows of that year
//   hotspots.csv (+ .meta.json)
//   urban_profile.json       sample time-of-day speed profile
//   emission_factors.csv     default factor table
//   scenario.json, plan.json
//   annual_totals.json       yearly totals for the extrapolation check
//   extrapolation_days.json  per-day sample inputs for the full formula

#include "ridesim/demand.hpp"
#include "ridesim/emissions.hpp"
#include "ridesim/error.hpp"
#include "ridesim/grid_network.hpp"
#include "ridesim/hotspots.hpp"
#include "ridesim/logbook.hpp"
#include "ridesim/random.hpp"
#include "ridesim/travel_model.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ridesim;

namespace {

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream out(p);
    if (!out) {
        throw DataError("cannot write " + p.string());
    }
    out << text;
    if (!text.empty() && text.back() != '\n') {
        out << '\n';
    }
}

json boundary_geojson(const DemandParams& p)
{
    // a little wider than the demand square, well short of the airport anchor
    const double h = p.half_extent_m + 300.0;
    json ring = json::array();
    for (auto [e, n] : {std::pair{-h, -h}, {h, -h}, {h, h}, {-h, h}, {-h, -h}}) {
        const LatLon c = offset_m(p.center, e, n);
        ring.push_back({c.lon, c.lat});
    }
    return {{"type", "Feature"},
            {"properties", {{"name", "synthetic service area"}}},
            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}}};
}

json urban_profile()
{
    return {{"breakpoints",
             json::array({{{"start", "00:00"}, {"factor", 1.0}},
                           {{"start", "06:30"}, {"factor", 0.85}},
                           {{"start", "07:30"}, {"factor", 0.65}},
                           {{"start", "09:30"}, {"factor", 0.8}},
                           {{"start", "15:30"}, {"factor", 0.65}},
                           {{"start", "19:00"}, {"factor", 0.85}},
                           {{"start", "21:00"}, {"factor", 1.0}}})}};
}

// Yearly per-reason mileage of the three strategies for the reference fleet;
// extrapolate must reproduce the derived rows from these.
json annual_totals()
{
    return {{"co2_g_per_km", 102.35},
            {"year_days", 365},
            {"totals", json::array({{{"name", "Return"}, {"S_p", 41409997}, {"S_r", 130365143}, {"S_b", 73478183}},
                                    {{"name", "Wait"}, {"S_p", 43668439}, {"S_r", 130365143}, {"S_b", 0}},
                                    {{"name", "Hotspot"},
                                     {"S_p", 44423004},
                                     {"S_r", 130365143},
                                     {"S_b", 19546686}}})}};
}

// One calendar year with a monthly fleet-size step from 4321 to 4486 and
// daily utilization in [0.2, 0.9].
json extrapolation_days(std::uint64_t seed)
{
    Rng rng(stream_seed(seed, "extrapolation_days"));
    const std::int64_t first = *parse_date("2023-01-01");
    json days = json::array();
    for (int d = 0; d < 365; ++d) {
        const std::string date = format_date(first + d);
        const int month = std::stoi(date.substr(5, 2)) - 1;
        const double fleet = std::round(4321.0 + (4486.0 - 4321.0) * month / 11.0);
        const bool weekend = static_cast<int>(weekday_of_day_number(first + d)) >= 4;
        const double util = std::round(uniform(rng, weekend ? 0.45 : 0.2, weekend ? 0.9 : 0.7) * 1000.0) / 1000.0;
        const double scale = weekend ? 1.1 : 1.0;
        days.push_back({{"date", date},
                        {"fleet_size", fleet},
                        {"utilization", util},
                        {"pickup_km", std::round(scale * uniform(rng, 36.0, 44.0) * 10.0) / 10.0},
                        {"ride_km", std::round(scale * uniform(rng, 118.0, 134.0) * 10.0) / 10.0},
                        {"rebalancing_km", std::round(scale * uniform(rng, 64.0, 78.0) * 10.0) / 10.0}});
    }
    const auto change = [](double p, double r, double b) {
        return json{{"pickup", p}, {"ride", r}, {"rebalancing", b}};
    };
    return {{"completion_factor", 1.17},
            {"co2_g_per_km", 102.35},
            {"year_days", 365},
            {"days", days},
            {"strategies", json::array({{{"name", "Return"}},
                                        {{"name", "Wait"},
                                         {"weekday", change(0.06, 0.0, -1.0)},
                                         {"weekend", change(0.04, 0.0, -1.0)}},
                                        {{"name", "Hotspot"},
                                         {"weekday", change(0.08, 0.0, -0.75)},
                                         {"weekend", change(0.06, 0.0, -0.78)}}})}};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generate the bundled synthetic scenario"};
    std::string out_dir = "data";
    std::uint64_t seed = 2023;
    int days = -1;
    std::size_t hotspot_points = 20000;
    app.add_option("out", out_dir, "output directory");
    app.add_option("--seed", seed, "demand seed");
    app.add_option("--days", days, "override the number of simulated calendar days");
    app.add_option("--hotspot-points", hotspot_points, "pickups used for hotspot derivation");
    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path dir(out_dir);
        fs::create_directories(dir);

        const RoadGraph grid = make_grid_network(GridSpec{});
        write_text(dir / "mini_berlin.json", network_to_json(grid));
        std::cout << "network: " << grid.node_count() << " nodes, " << grid.edge_count() << " edges\n";

        DemandParams params;
        if (days >= 0) {
            params.days = days;
        }
        params.validate();
        write_text(dir / "demand.json", demand_params_to_json(params));
        write_text(dir / "boundary.geojson", boundary_geojson(params).dump(2));

        auto routed = std::make_shared<const RoadGraph>(grid.with_turn_model(TurnCostModel{}));
        const NetworkTravelModel model(routed);
        const auto orders = synthesize_demand(params, seed, model);
        write_logbook((dir / "source_logbook.csv").string(), orders);
        const std::size_t head = std::min<std::size_t>(500, orders.size());
        write_logbook((dir / "logbook_500.csv").string(), std::span(orders).first(head));
        std::cout << "source logbook: " << orders.size() << " orders\n";

        // hotspots from in-area pickups only, as read back from the written
        // logbook so that consumers of the file can reproduce them
        const Polygon boundary = parse_polygon(boundary_geojson(params).dump());
        const auto shifts = extract_shifts(parse_logbook((dir / "source_logbook.csv").string()).orders);
        const auto kept = filter_out_of_area(shifts, boundary).kept;
        std::vector<LatLon> pickups;
        for (const auto& s : kept) {
            for (const auto& r : s.rides) {
                pickups.push_back(r.pickup_location);
            }
        }
        const auto sample = thin_points(pickups, hotspot_points);
        const HotspotSet hs = derive_hotspots(sample, 60, 10);
        write_hotspots(hs, (dir / "hotspots.csv").string());
        std::cout << "hotspots: " << hs.size() << " at eps " << hs.eps_m << " m from " << sample.size()
                  << " pickups\n";
        for (const auto& w : hs.warnings) {
            std::cout << "warning: " << w << '\n';
        }

        write_text(dir / "urban_profile.json", urban_profile().dump(2));
        {
            std::ofstream f(dir / "emission_factors.csv");
            write_factor_table(f, default_factor_table());
        }

        const json scenario = {{"network", "mini_berlin.json"},
                               {"source_logbook", "source_logbook.csv"},
                               {"boundary", "boundary.geojson"},
                               {"hotspots", "hotspots.csv"},
                               {"emission_table", "emission_factors.csv"},
                               {"turn_costs", {{"straight_s", 0}, {"right_s", 0}, {"left_s", 15}, {"uturn_s", 30}}},
                               {"strategy", "return"},
                               {"pob", {{"lat", params.pob.lat}, {"lon", params.pob.lon}}},
                               {"min_dwell_s", 30},
                               {"message_latency_s", 1},
                               {"hotspot_wait_probability", 0.2},
                               {"seed", 1},
                               {"day", "wednesday"},
                               {"fleet_size", 50},
                               {"emission_mode", "trip"}};
        write_text(dir / "scenario.json", scenario.dump(2));

        json seeds = json::array();
        for (int s = 1; s <= 8; ++s) {
            seeds.push_back(s);
        }
        const json plan = {{"scenario", "scenario.json"},
                           {"days", {"wednesday", "saturday"}},
                           {"strategies", {"return", "wait", "hotspot"}},
                           {"seeds", seeds},
                           {"parallel", 3}};
        write_text(dir / "plan.json", plan.dump(2));

        write_text(dir / "annual_totals.json", annual_totals().dump(2));
        write_text(dir / "extrapolation_days.json", extrapolation_days(seed).dump(1));
    } catch (const std::exception& e) {
        std::cerr << "make_fixtures: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
