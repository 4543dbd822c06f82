#pragma once

#include "ridesim/road_graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ridesim {

/// Time-of-day multiplier on free-flow speeds. Piecewise constant; each
/// breakpoint holds from its start until the next one, the last wraps to midnight.
class SpeedProfile {
public:
    struct Breakpoint {
        double start_s = 0.0; // seconds after local midnight
        double factor = 1.0;  // in (0, 1]
    };

    SpeedProfile() : points_{{0.0, 1.0}} {}

    /// Throws ConfigError unless the first breakpoint starts at 0, starts are
    /// strictly increasing below 86400 and every factor is in (0, 1].
    explicit SpeedProfile(std::vector<Breakpoint> points);

    [[nodiscard]] double factor_at(double seconds_of_day) const;
    [[nodiscard]] bool is_uniform() const;
    [[nodiscard]] const std::vector<Breakpoint>& breakpoints() const { return points_; }

private:
    std::vector<Breakpoint> points_;
};

/// JSON: {"breakpoints": [{"start": "HH:MM", "factor": 0.8}, ...]}
SpeedProfile parse_speed_profile(const std::string& json_text);
SpeedProfile load_speed_profile(const std::string& path);

/// A drivable sequence of edges. Offsets allow a route to start or end
/// part-way along an edge (diversions, truncated trips).
struct Route {
    std::vector<EdgeIndex> edges;
    double start_offset_m = 0.0; // part of edges.front() already behind the vehicle
    double end_trim_m = 0.0;     // part of edges.back() left undriven
    double speed_factor = 1.0;   // profile factor fixed at departure
    double total_length_m = 0.0;
    double total_time_s = 0.0;

    [[nodiscard]] bool empty() const { return edges.empty(); }
};

/// Traversal time of a whole edge at the given profile factor.
inline double edge_time_s(const RoadGraph& graph, EdgeIndex e, double factor)
{
    const Edge& edge = graph.edge(e);
    return edge.length_m / (edge.speed_mps * factor);
}

/// Minimum travel-time route between two nodes, searched over the
/// edge-expanded graph so turn penalties are charged exactly. Edge times use
/// the profile factor at `departure_s` (seconds of day). std::nullopt when
/// `dest` is unreachable; an empty route when origin == dest.
std::optional<Route> fastest_path(const RoadGraph& graph, NodeIndex origin, NodeIndex dest, double departure_s,
                                  const SpeedProfile& profile = {});

/// Same search for a vehicle currently `offset_m` along `edge`; the remainder
/// of that edge is driven first and turns out of it are penalized.
std::optional<Route> fastest_path_from_edge(const RoadGraph& graph, EdgeIndex edge, double offset_m, NodeIndex dest,
                                            double departure_s, const SpeedProfile& profile = {});

struct PathCost {
    double time_s = 0.0;
    double length_m = 0.0;
    bool reachable = false;
};

/// Fastest-route time and length from `origin` to every node at a fixed speed factor.
std::vector<PathCost> fastest_costs_from(const RoadGraph& graph, NodeIndex origin, double factor = 1.0);

/// Where a vehicle driving `route` is after `elapsed_s`.
struct RoutePosition {
    bool at_origin = true;    // has not left the route's starting point
    std::size_t edge_pos = 0; // index into route.edges (valid when !at_origin)
    double along_m = 0.0;     // distance from the tail of that edge
    double distance_m = 0.0;  // driven so far along the route
    double elapsed_s = 0.0;
    LatLon where;
};

RoutePosition position_at(const RoadGraph& graph, const Route& route, double elapsed_s);

/// Prefix of `route` up to `pos`.
Route truncate_route(const RoadGraph& graph, const Route& route, const RoutePosition& pos);

/// Start node of a non-empty route (tail of its first edge).
NodeIndex route_origin(const RoadGraph& graph, const Route& route);

} // namespace ridesim
