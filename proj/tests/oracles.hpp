#pragma once

// Slow, obviously-correct reference implementations used by the tests.

#include "ridesim/geo.hpp"
#include "ridesim/road_graph.hpp"

#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using ridesim::EdgeIndex;
using ridesim::LatLon;
using ridesim::NodeIndex;
using ridesim::RoadGraph;

inline double edge_time(const RoadGraph& g, EdgeIndex e, double factor)
{
    return g.edge(e).length_m / (g.edge(e).speed_mps * factor);
}

// Cheapest walk that never reuses an edge, by depth-first enumeration. With
// non-negative costs an optimal turn-penalized route never needs to repeat an
// edge, so this is exact. Costs accumulate in driving order.
inline std::optional<double> min_trail_cost(const RoadGraph& g, NodeIndex origin, NodeIndex dest, double factor = 1.0)
{
    if (origin == dest) {
        return 0.0;
    }
    std::optional<double> best;
    std::vector<char> used(g.edge_count(), 0);
    std::function<void(EdgeIndex, double)> walk = [&](EdgeIndex e, double cost) {
        if (g.edge(e).to == dest) {
            if (!best || cost < *best) {
                best = cost;
            }
            return;
        }
        for (EdgeIndex f : g.out_edges(g.edge(e).to)) {
            if (!used[f]) {
                used[f] = 1;
                walk(f, cost + (g.turn_penalty(e, f) + edge_time(g, f, factor)));
                used[f] = 0;
            }
        }
    };
    for (EdgeIndex e : g.out_edges(origin)) {
        used[e] = 1;
        walk(e, edge_time(g, e, factor));
        used[e] = 0;
    }
    return best;
}

// Every path that visits no node twice, with its cost.
inline std::vector<std::pair<std::vector<EdgeIndex>, double>> node_simple_paths(const RoadGraph& g, NodeIndex origin,
                                                                                NodeIndex dest, double factor = 1.0)
{
    std::vector<std::pair<std::vector<EdgeIndex>, double>> out;
    std::vector<char> seen(g.node_count(), 0);
    std::vector<EdgeIndex> path;
    std::function<void(double)> walk = [&](double cost) {
        const NodeIndex at = g.edge(path.back()).to;
        if (at == dest) {
            out.emplace_back(path, cost);
            return;
        }
        for (EdgeIndex f : g.out_edges(at)) {
            if (!seen[g.edge(f).to]) {
                seen[g.edge(f).to] = 1;
                const double step = g.turn_penalty(path.back(), f) + edge_time(g, f, factor);
                path.push_back(f);
                walk(cost + step);
                path.pop_back();
                seen[g.edge(f).to] = 0;
            }
        }
    };
    seen[origin] = 1;
    for (EdgeIndex e : g.out_edges(origin)) {
        if (!seen[g.edge(e).to]) {
            seen[g.edge(e).to] = 1;
            path.push_back(e);
            walk(edge_time(g, e, factor));
            path.pop_back();
            seen[g.edge(e).to] = 0;
        }
    }
    return out;
}

// Textbook node-based Dijkstra on travel time, ignoring turn penalties.
inline std::vector<double> node_dijkstra(const RoadGraph& g, NodeIndex origin, double factor = 1.0)
{
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.node_count(), inf);
    std::vector<char> done(g.node_count(), 0);
    dist[origin] = 0.0;
    for (std::size_t iter = 0; iter < g.node_count(); ++iter) {
        NodeIndex u = 0;
        double best = inf;
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            if (!done[v] && dist[v] < best) {
                best = dist[v];
                u = v;
            }
        }
        if (best == inf) {
            break;
        }
        done[u] = 1;
        for (EdgeIndex e : g.out_edges(u)) {
            const NodeIndex v = g.edge(e).to;
            dist[v] = std::min(dist[v], dist[u] + edge_time(g, e, factor));
        }
    }
    return dist;
}

inline NodeIndex linear_nearest_node(const RoadGraph& g, LatLon p)
{
    NodeIndex best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const double d = ridesim::haversine_m(g.node(i).pos, p);
        if (d < best_d || (d == best_d && g.node(i).id < g.node(best).id)) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

// O(n^2) DBSCAN reference: full neighbour lists, then connected components
// of the core-to-core eps graph.
struct BruteDbscan {
    std::vector<bool> core;
    std::vector<int> core_component; // -1 for non-core points
    std::vector<std::vector<std::size_t>> neighbours;
};

inline BruteDbscan brute_dbscan(const std::vector<LatLon>& pts, double eps, std::size_t min_pts)
{
    const std::size_t n = pts.size();
    BruteDbscan r;
    r.neighbours.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (ridesim::haversine_m(pts[i], pts[j]) <= eps) {
                r.neighbours[i].push_back(j);
            }
        }
    }
    r.core.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.core[i] = r.neighbours[i].size() >= min_pts;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.core[i]) {
            continue;
        }
        for (std::size_t j : r.neighbours[i]) {
            if (r.core[j]) {
                parent[root(i)] = root(j);
            }
        }
    }
    r.core_component.assign(n, -1);
    std::map<std::size_t, int> ids;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.core[i]) {
            r.core_component[i] = ids.emplace(root(i), static_cast<int>(ids.size())).first->second;
        }
    }
    return r;
}

// Two labelings describe the same partition of the selected points.
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b, const std::vector<bool>& select)
{
    std::map<int, int> ab;
    std::map<int, int> ba;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!select[i]) {
            continue;
        }
        if (a[i] < 0 || b[i] < 0) {
            return false;
        }
        const auto [it1, new1] = ab.emplace(a[i], b[i]);
        const auto [it2, new2] = ba.emplace(b[i], a[i]);
        if (it1->second != b[i] || it2->second != a[i]) {
            return false;
        }
    }
    return true;
}

// Winding-number containment, independent of the ray-casting implementation.
inline bool winding_contains(const std::vector<LatLon>& ring, LatLon p)
{
    int wn = 0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const LatLon a = ring[i];
        const LatLon b = ring[(i + 1) % n];
        const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (p.lon - a.lon) * (b.lat - a.lat);
        if (a.lat <= p.lat) {
            if (b.lat > p.lat && cross > 0) {
                ++wn;
            }
        } else if (b.lat <= p.lat && cross < 0) {
            --wn;
        }
    }
    return wn != 0;
}

} // namespace oracle
