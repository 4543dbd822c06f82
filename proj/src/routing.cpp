#include "ridesim/routing.hpp"

#include "ridesim/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

namespace ridesim {

SpeedProfile::SpeedProfile(std::vector<Breakpoint> points) : points_(std::move(points))
{
    if (points_.empty() || points_.front().start_s != 0.0) {
        throw ConfigError("speed profile must start at 00:00");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i].factor > 0.0 && points_[i].factor <= 1.0)) {
            throw ConfigError("speed profile factors must lie in (0, 1]");
        }
        if (points_[i].start_s >= 86400.0 || (i > 0 && points_[i].start_s <= points_[i - 1].start_s)) {
            throw ConfigError("speed profile breakpoints must be increasing within one day");
        }
    }
}

double SpeedProfile::factor_at(double seconds_of_day) const
{
    double s = std::fmod(seconds_of_day, 86400.0);
    if (s < 0.0) {
        s += 86400.0;
    }
    auto it = std::upper_bound(points_.begin(), points_.end(), s,
                               [](double v, const Breakpoint& b) { return v < b.start_s; });
    return std::prev(it)->factor;
}

bool SpeedProfile::is_uniform() const
{
    return std::all_of(points_.begin(), points_.end(), [](const Breakpoint& b) { return b.factor == 1.0; });
}

SpeedProfile parse_speed_profile(const std::string& json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("speed profile: ") + e.what());
    }
    if (!doc.contains("breakpoints") || !doc["breakpoints"].is_array()) {
        throw ConfigError("speed profile needs a 'breakpoints' array");
    }
    std::vector<SpeedProfile::Breakpoint> pts;
    for (const auto& b : doc["breakpoints"]) {
        const auto start = b.value("start", std::string{});
        int hh = 0, mm = 0;
        if (start.size() != 5 || start[2] != ':' || std::sscanf(start.c_str(), "%d:%d", &hh, &mm) != 2 || hh < 0 ||
            hh > 23 || mm < 0 || mm > 59) {
            throw ConfigError("speed profile start must be HH:MM, got '" + start + "'");
        }
        if (!b.contains("factor") || !b["factor"].is_number()) {
            throw ConfigError("speed profile breakpoint needs a numeric 'factor'");
        }
        pts.push_back({hh * 3600.0 + mm * 60.0, b["factor"].get<double>()});
    }
    return SpeedProfile(std::move(pts));
}

SpeedProfile load_speed_profile(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open speed profile " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_speed_profile(ss.str());
}

namespace {

struct Label {
    double cost;
    EdgeIndex edge;
    bool operator>(const Label& o) const { return cost != o.cost ? cost > o.cost : edge > o.edge; }
};

constexpr EdgeIndex kNoEdge = std::numeric_limits<EdgeIndex>::max();

struct SearchState {
    std::vector<double> dist;
    std::vector<EdgeIndex> parent;
    std::vector<char> done;
};

// Edge-expanded Dijkstra. `visit` returns true to stop at the popped edge.
template <typename Visit>
std::optional<EdgeIndex> edge_dijkstra(const RoadGraph& graph, std::span<const std::pair<EdgeIndex, double>> seeds,
                                       double factor, SearchState& st, Visit&& visit)
{
    const std::size_t m = graph.edge_count();
    st.dist.assign(m, std::numeric_limits<double>::infinity());
    st.parent.assign(m, kNoEdge);
    st.done.assign(m, 0);
    std::priority_queue<Label, std::vector<Label>, std::greater<>> heap;
    for (const auto& [e, c] : seeds) {
        if (c < st.dist[e]) {
            st.dist[e] = c;
            heap.push({c, e});
        }
    }
    while (!heap.empty()) {
        const Label top = heap.top();
        heap.pop();
        if (st.done[top.edge] || top.cost > st.dist[top.edge]) {
            continue;
        }
        st.done[top.edge] = 1;
        if (visit(top.edge)) {
            return top.edge;
        }
        const auto outs = graph.out_edges(graph.edge(top.edge).to);
        const auto penalties = graph.turn_penalties_from(top.edge);
        for (std::size_t k = 0; k < outs.size(); ++k) {
            const EdgeIndex f = outs[k];
            if (st.done[f]) {
                continue;
            }
            const double c = top.cost + (penalties[k] + edge_time_s(graph, f, factor));
            if (c < st.dist[f] || (c == st.dist[f] && top.edge < st.parent[f])) {
                st.dist[f] = c;
                st.parent[f] = top.edge;
                heap.push({c, f});
            }
        }
    }
    return std::nullopt;
}

Route assemble(const RoadGraph& graph, const SearchState& st, EdgeIndex last, double start_offset, double factor)
{
    Route r;
    for (EdgeIndex e = last; e != kNoEdge; e = st.parent[e]) {
        r.edges.push_back(e);
    }
    std::reverse(r.edges.begin(), r.edges.end());
    r.start_offset_m = start_offset;
    r.speed_factor = factor;
    double length = 0.0;
    for (EdgeIndex e : r.edges) {
        length += graph.edge(e).length_m;
    }
    r.total_length_m = start_offset > 0.0 ? length - start_offset : length;
    r.total_time_s = st.dist[last];
    return r;
}

} // namespace

std::optional<Route> fastest_path(const RoadGraph& graph, NodeIndex origin, NodeIndex dest, double departure_s,
                                  const SpeedProfile& profile)
{
    const double factor = profile.factor_at(departure_s);
    if (origin == dest) {
        Route r;
        r.speed_factor = factor;
        return r;
    }
    std::vector<std::pair<EdgeIndex, double>> seeds;
    for (EdgeIndex e : graph.out_edges(origin)) {
        seeds.emplace_back(e, edge_time_s(graph, e, factor));
    }
    SearchState st;
    const auto hit = edge_dijkstra(graph, seeds, factor, st, [&](EdgeIndex e) { return graph.edge(e).to == dest; });
    if (!hit) {
        return std::nullopt;
    }
    return assemble(graph, st, *hit, 0.0, factor);
}

std::optional<Route> fastest_path_from_edge(const RoadGraph& graph, EdgeIndex edge, double offset_m, NodeIndex dest,
                                            double departure_s, const SpeedProfile& profile)
{
    const double factor = profile.factor_at(departure_s);
    const Edge& e = graph.edge(edge);
    offset_m = std::clamp(offset_m, 0.0, e.length_m);
    const double first = (e.length_m - offset_m) / (e.speed_mps * factor);
    const std::pair<EdgeIndex, double> seed{edge, first};
    SearchState st;
    const auto hit = edge_dijkstra(graph, std::span(&seed, 1), factor, st,
                                   [&](EdgeIndex x) { return graph.edge(x).to == dest; });
    if (!hit) {
        return std::nullopt;
    }
    return assemble(graph, st, *hit, offset_m, factor);
}

std::vector<PathCost> fastest_costs_from(const RoadGraph& graph, NodeIndex origin, double factor)
{
    std::vector<PathCost> out(graph.node_count());
    out[origin] = {0.0, 0.0, true};
    std::vector<std::pair<EdgeIndex, double>> seeds;
    for (EdgeIndex e : graph.out_edges(origin)) {
        seeds.emplace_back(e, edge_time_s(graph, e, factor));
    }
    SearchState st;
    std::vector<double> length(graph.edge_count(), 0.0);
    edge_dijkstra(graph, seeds, factor, st, [&](EdgeIndex e) {
        const EdgeIndex p = st.parent[e];
        length[e] = (p == kNoEdge ? 0.0 : length[p]) + graph.edge(e).length_m;
        auto& slot = out[graph.edge(e).to];
        if (!slot.reachable) {
            slot = {st.dist[e], length[e], true};
        }
        return false;
    });
    return out;
}

NodeIndex route_origin(const RoadGraph& graph, const Route& route)
{
    return graph.edge(route.edges.front()).from;
}

RoutePosition position_at(const RoadGraph& graph, const Route& route, double elapsed_s)
{
    RoutePosition pos;
    pos.elapsed_s = std::max(0.0, elapsed_s);
    if (route.edges.empty()) {
        return pos;
    }
    const auto point_on = [&](EdgeIndex e, double along) {
        const Edge& edge = graph.edge(e);
        return lerp(graph.node(edge.from).pos, graph.node(edge.to).pos, along / edge.length_m);
    };
    const std::size_t last = route.edges.size() - 1;
    if (elapsed_s <= 0.0) {
        if (route.start_offset_m == 0.0) {
            pos.where = graph.node(route_origin(graph, route)).pos;
            return pos;
        }
        pos.at_origin = false;
        pos.along_m = route.start_offset_m;
        pos.where = point_on(route.edges[0], pos.along_m);
        return pos;
    }
    pos.at_origin = false;
    double t = 0.0;
    double dist = 0.0;
    for (std::size_t i = 0; i <= last; ++i) {
        const EdgeIndex e = route.edges[i];
        const Edge& edge = graph.edge(e);
        if (i > 0) {
            const double p = graph.turn_penalty(route.edges[i - 1], e);
            if (elapsed_s < t + p) {
                // waiting to turn: still at the end of the previous edge
                pos.edge_pos = i - 1;
                pos.along_m = graph.edge(route.edges[i - 1]).length_m;
                pos.distance_m = dist;
                pos.where = graph.node(edge.from).pos;
                return pos;
            }
            t += p;
        }
        const double from = i == 0 ? route.start_offset_m : 0.0;
        const double to = i == last ? edge.length_m - route.end_trim_m : edge.length_m;
        const double v = edge.speed_mps * route.speed_factor;
        const double te = (to - from) / v;
        if (elapsed_s < t + te) {
            pos.edge_pos = i;
            pos.along_m = from + (elapsed_s - t) * v;
            pos.distance_m = dist + (pos.along_m - from);
            pos.where = point_on(e, pos.along_m);
            return pos;
        }
        t += te;
        dist += to - from;
    }
    pos.edge_pos = last;
    pos.along_m = graph.edge(route.edges[last]).length_m - route.end_trim_m;
    pos.distance_m = route.total_length_m;
    pos.where = point_on(route.edges[last], pos.along_m);
    return pos;
}

Route truncate_route(const RoadGraph& graph, const Route& route, const RoutePosition& pos)
{
    Route r;
    r.speed_factor = route.speed_factor;
    if (pos.at_origin || route.edges.empty()) {
        return r;
    }
    r.edges.assign(route.edges.begin(), route.edges.begin() + static_cast<std::ptrdiff_t>(pos.edge_pos) + 1);
    r.start_offset_m = route.start_offset_m;
    r.end_trim_m = graph.edge(r.edges.back()).length_m - pos.along_m;
    r.total_length_m = pos.distance_m;
    r.total_time_s = std::min(pos.elapsed_s, route.total_time_s);
    return r;
}

} // namespace ridesim
