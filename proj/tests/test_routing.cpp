#include "doctest.h"

#include "oracles.hpp"

#include "ridesim/random.hpp"
#include "ridesim/road_graph.hpp"
#include "ridesim/routing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace ridesim;

namespace {

// Random directed graph on <= 12 nodes. With `integral` every edge takes a
// whole number of seconds and penalties are whole seconds, so costs are exact
// in floating point whatever the summation order.
RoadGraph random_graph(Rng& rng, bool integral)
{
    const auto n = static_cast<int>(4 + uniform_index(rng, 9));
    std::vector<NodeSpec> nodes;
    for (int i = 0; i < n; ++i) {
        nodes.push_back({i + 1, {uniform(rng, 52.45, 52.55), uniform(rng, 13.3, 13.5)}});
    }
    std::set<std::pair<int, int>> used;
    std::vector<EdgeSpec> edges;
    const auto add = [&](int a, int b) {
        if (a == b || !used.emplace(a, b).second) {
            return;
        }
        const double len = integral ? 10.0 * static_cast<double>(10 + uniform_index(rng, 90)) : uniform(rng, 50.0, 900.0);
        const double speed = integral ? 10.0 : uniform(rng, 5.0, 15.0);
        edges.push_back({static_cast<std::int64_t>(edges.size() + 1), a, b, len, speed});
    };
    // a ring keeps most pairs reachable, chords add alternatives
    for (int i = 1; i <= n; ++i) {
        if (bernoulli(rng, 0.85)) {
            add(i, i % n + 1);
        }
    }
    const auto chords = static_cast<int>(n + uniform_index(rng, static_cast<std::uint64_t>(n)));
    for (int k = 0; k < chords; ++k) {
        add(static_cast<int>(1 + uniform_index(rng, n)), static_cast<int>(1 + uniform_index(rng, n)));
    }
    std::vector<TurnPenaltySpec> turns;
    for (const auto& in : edges) {
        for (const auto& out : edges) {
            if (in.to == out.from && bernoulli(rng, 0.6)) {
                const double s = integral ? static_cast<double>(uniform_index(rng, 31)) : uniform(rng, 0.0, 30.0);
                turns.push_back({in.id, out.id, s});
            }
        }
    }
    return RoadGraph(std::move(nodes), std::move(edges), std::move(turns));
}

double route_cost(const RoadGraph& g, const std::vector<EdgeIndex>& edges, double factor = 1.0)
{
    double c = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        c += (i ? g.turn_penalty(edges[i - 1], edges[i]) : 0.0) + oracle::edge_time(g, edges[i], factor);
    }
    return c;
}

void check_route_legal(const RoadGraph& g, const Route& r, NodeIndex origin, NodeIndex dest)
{
    REQUIRE_FALSE(r.empty());
    CHECK(g.edge(r.edges.front()).from == origin);
    CHECK(g.edge(r.edges.back()).to == dest);
    double len = 0.0;
    for (std::size_t i = 0; i < r.edges.size(); ++i) {
        if (i > 0) {
            CHECK(g.edge(r.edges[i - 1]).to == g.edge(r.edges[i]).from);
        }
        len += g.edge(r.edges[i]).length_m;
    }
    CHECK(r.total_length_m == len);
    CHECK(r.total_time_s >= r.total_length_m / g.max_speed_mps());
}

// 2x2 block of 100 m edges at 10 m/s, node ids 1 (SW), 2 (SE), 3 (NW), 4 (NE).
RoadGraph block(double left_s)
{
    const LatLon sw{52.5, 13.4};
    const LatLon se = offset_m(sw, 100, 0);
    const LatLon nw = offset_m(sw, 0, 100);
    const LatLon ne = offset_m(sw, 100, 100);
    std::vector<EdgeSpec> edges;
    std::int64_t id = 1;
    for (auto [a, b] : {std::pair{1, 2}, {2, 4}, {1, 3}, {3, 4}}) {
        edges.push_back({id++, a, b, 100, 10});
        edges.push_back({id++, b, a, 100, 10});
    }
    TurnCostModel m;
    m.left_s = left_s;
    return RoadGraph({{1, sw}, {2, se}, {3, nw}, {4, ne}}, edges).with_turn_model(m);
}

} // namespace

TEST_CASE("origin equal to destination gives an empty route")
{
    const RoadGraph g = block(15);
    const auto r = fastest_path(g, 0, 0, 0.0);
    REQUIRE(r);
    CHECK(r->empty());
    CHECK(r->total_length_m == 0.0);
    CHECK(r->total_time_s == 0.0);
}

TEST_CASE("corner to corner prefers the right turn")
{
    // From NW (3) to SE (2): east then south turns right, south then east turns left.
    const RoadGraph g = block(15);
    const NodeIndex nw = *g.find_node(3);
    const NodeIndex se = *g.find_node(2);
    const auto all = oracle::node_simple_paths(g, nw, se);
    REQUIRE(all.size() == 2);
    std::vector<double> costs;
    for (const auto& p : all) {
        costs.push_back(p.second);
    }
    std::sort(costs.begin(), costs.end());
    CHECK(costs[0] == doctest::Approx(20.0));
    CHECK(costs[1] == doctest::Approx(35.0));

    const auto r = fastest_path(g, nw, se, 0.0);
    REQUIRE(r);
    CHECK(r->total_time_s == doctest::Approx(20.0));
    REQUIRE(r->edges.size() == 2);
    CHECK(g.node(g.edge(r->edges[0]).to).id == 4); // via NE
    check_route_legal(g, *r, nw, se);
}

TEST_CASE("a slightly longer route avoiding a left turn wins")
{
    // A(1) -> B(2) -> C(3) turns left at B. The detour A -> D -> E -> F -> C
    // is 5% longer but only turns right or goes straight.
    const RoadGraph raw({{1, {52.500, 13.400}},
                         {2, {52.500, 13.410}},
                         {3, {52.510, 13.410}},
                         {4, {52.4995, 13.402}},
                         {5, {52.4995, 13.408}},
                         {6, {52.505, 13.4105}}},
                        {{1, 1, 2, 1000, 10},
                         {2, 2, 3, 1000, 10},
                         {3, 1, 4, 650, 10},
                         {4, 4, 5, 650, 10},
                         {5, 5, 6, 400, 10},
                         {6, 6, 3, 400, 10}},
                        {{1, 2, 15.0}});
    const NodeIndex a = *raw.find_node(1);
    const NodeIndex c = *raw.find_node(3);
    const auto paths = oracle::node_simple_paths(raw, a, c);
    REQUIRE(paths.size() == 2);
    const auto best = std::min_element(paths.begin(), paths.end(),
                                       [](const auto& x, const auto& y) { return x.second < y.second; });
    CHECK(best->first.size() == 4);
    CHECK(best->second == doctest::Approx(210.0));

    const auto r = fastest_path(raw, a, c, 0.0);
    REQUIRE(r);
    CHECK(r->edges == best->first);
    CHECK(r->total_length_m == doctest::Approx(2100.0));
    CHECK(r->total_time_s == doctest::Approx(210.0));
}

TEST_CASE("unreachable destination")
{
    const RoadGraph g({{1, {52.5, 13.4}}, {2, {52.5, 13.41}}}, {{1, 1, 2, 500, 10}});
    CHECK_FALSE(fastest_path(g, *g.find_node(2), *g.find_node(1), 0.0));
}

TEST_CASE("fastest_path equals exhaustive trail enumeration on random small graphs")
{
    Rng rng(stream_seed(11, "routing-oracle"));
    int compared = 0;
    for (int gi = 0; gi < 60; ++gi) {
        const bool integral = gi % 2 == 0;
        const RoadGraph g = random_graph(rng, integral);
        for (NodeIndex o = 0; o < g.node_count(); ++o) {
            for (NodeIndex d = 0; d < g.node_count(); ++d) {
                if (o == d) {
                    continue;
                }
                const auto expect = oracle::min_trail_cost(g, o, d);
                const auto r = fastest_path(g, o, d, 0.0);
                REQUIRE(r.has_value() == expect.has_value());
                if (!r) {
                    continue;
                }
                ++compared;
                if (integral) {
                    CHECK(r->total_time_s == *expect);
                } else {
                    CHECK(r->total_time_s == doctest::Approx(*expect).epsilon(1e-12));
                }
                CHECK(route_cost(g, r->edges) == doctest::Approx(r->total_time_s).epsilon(1e-12));
                check_route_legal(g, *r, o, d);
                // no node-simple alternative is cheaper
                for (const auto& [path, cost] : oracle::node_simple_paths(g, o, d)) {
                    CHECK(r->total_time_s <= cost + 1e-9);
                }
            }
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("without turn penalties fastest_path equals node-based Dijkstra")
{
    Rng rng(stream_seed(12, "routing-dijkstra"));
    for (int gi = 0; gi < 30; ++gi) {
        const RoadGraph with = random_graph(rng, false);
        std::vector<NodeSpec> nodes;
        for (const auto& n : with.nodes()) {
            nodes.push_back({n.id, n.pos});
        }
        std::vector<EdgeSpec> edges;
        for (const auto& e : with.edges()) {
            edges.push_back({e.id, with.node(e.from).id, with.node(e.to).id, e.length_m, e.speed_mps});
        }
        const RoadGraph g(nodes, edges);
        for (NodeIndex o = 0; o < g.node_count(); ++o) {
            const auto ref = oracle::node_dijkstra(g, o);
            const auto all = fastest_costs_from(g, o);
            for (NodeIndex d = 0; d < g.node_count(); ++d) {
                const auto r = fastest_path(g, o, d, 0.0);
                if (std::isinf(ref[d])) {
                    CHECK_FALSE(r);
                    CHECK_FALSE(all[d].reachable);
                    continue;
                }
                REQUIRE(r);
                CHECK(r->total_time_s == doctest::Approx(ref[d]).epsilon(1e-12));
                CHECK(all[d].time_s == doctest::Approx(ref[d]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("adding a turn penalty never lowers the route cost")
{
    Rng rng(stream_seed(13, "routing-monotone"));
    for (int gi = 0; gi < 40; ++gi) {
        const RoadGraph g = random_graph(rng, false);
        const NodeIndex o = static_cast<NodeIndex>(uniform_index(rng, g.node_count()));
        const NodeIndex d = static_cast<NodeIndex>(uniform_index(rng, g.node_count()));
        const auto base = fastest_path(g, o, d, 0.0);
        if (!base || base->edges.size() < 2) {
            continue;
        }
        // raise the penalty on a pair the route actually uses
        const std::size_t k = 1 + uniform_index(rng, base->edges.size() - 1);
        std::vector<NodeSpec> nodes;
        for (const auto& n : g.nodes()) {
            nodes.push_back({n.id, n.pos});
        }
        std::vector<EdgeSpec> edges;
        for (const auto& e : g.edges()) {
            edges.push_back({e.id, g.node(e.from).id, g.node(e.to).id, e.length_m, e.speed_mps});
        }
        auto turns = g.explicit_turn_penalties();
        const std::int64_t in = g.edge(base->edges[k - 1]).id;
        const std::int64_t out = g.edge(base->edges[k]).id;
        std::erase_if(turns, [&](const TurnPenaltySpec& t) { return t.from_edge == in && t.to_edge == out; });
        turns.push_back({in, out, g.turn_penalty(base->edges[k - 1], base->edges[k]) + uniform(rng, 1.0, 60.0)});
        const RoadGraph h(nodes, edges, turns);
        const auto after = fastest_path(h, o, d, 0.0);
        REQUIRE(after);
        CHECK(after->total_time_s >= base->total_time_s);
    }
}

TEST_CASE("profile factor is fixed at departure")
{
    const RoadGraph g = block(15);
    const SpeedProfile p({{0.0, 1.0}, {8 * 3600.0, 0.5}, {10 * 3600.0, 1.0}});
    const NodeIndex nw = *g.find_node(3);
    const NodeIndex se = *g.find_node(2);
    const auto night = fastest_path(g, nw, se, 3600.0, p);
    const auto rush = fastest_path(g, nw, se, 9 * 3600.0, p);
    REQUIRE(night);
    REQUIRE(rush);
    CHECK(night->total_time_s == doctest::Approx(20.0));
    CHECK(rush->total_time_s == doctest::Approx(40.0));
    CHECK(rush->speed_factor == 0.5);
    // a trip departing just before the slow period keeps the fast factor
    const auto edge_of_day = fastest_path(g, nw, se, 8 * 3600.0 - 1.0, p);
    CHECK(edge_of_day->total_time_s == doctest::Approx(20.0));
}

TEST_CASE("position along a route and truncation")
{
    // straight two-edge road: 300 m at 10 m/s then 200 m at 20 m/s
    const RoadGraph g({{1, {52.5, 13.40}}, {2, offset_m({52.5, 13.40}, 300, 0)}, {3, offset_m({52.5, 13.40}, 500, 0)}},
                      {{1, 1, 2, 300, 10}, {2, 2, 3, 200, 20}});
    const auto r = fastest_path(g, 0, 2, 0.0);
    REQUIRE(r);
    CHECK(r->total_time_s == doctest::Approx(40.0));

    SUBCASE("halfway by time")
    {
        // 20 s in: 200 m along the first edge
        const RoutePosition pos = position_at(g, *r, 20.0);
        CHECK_FALSE(pos.at_origin);
        CHECK(pos.edge_pos == 0);
        CHECK(pos.along_m == doctest::Approx(200.0));
        CHECK(pos.distance_m == doctest::Approx(200.0));
        const Route cut = truncate_route(g, *r, pos);
        CHECK(cut.total_length_m == doctest::Approx(200.0));
        CHECK(cut.total_time_s == doctest::Approx(20.0));
    }
    SUBCASE("into the second edge")
    {
        // 35 s: first edge done at 30 s, then 5 s at 20 m/s
        const RoutePosition pos = position_at(g, *r, 35.0);
        CHECK(pos.edge_pos == 1);
        CHECK(pos.along_m == doctest::Approx(100.0));
        CHECK(pos.distance_m == doctest::Approx(400.0));
    }
    SUBCASE("before departure and after arrival")
    {
        CHECK(position_at(g, *r, 0.0).distance_m == 0.0);
        CHECK(position_at(g, *r, 0.0).at_origin);
        CHECK(position_at(g, *r, 99.0).distance_m == doctest::Approx(500.0));
    }
    SUBCASE("resume from mid-edge")
    {
        const auto rest = fastest_path_from_edge(g, 0, 200.0, 2, 0.0);
        REQUIRE(rest);
        CHECK(rest->total_length_m == doctest::Approx(300.0));
        CHECK(rest->total_time_s == doctest::Approx(20.0));
        CHECK(rest->start_offset_m == 200.0);
    }
}
