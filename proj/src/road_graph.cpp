#include "ridesim/road_graph.hpp"

#include "ridesim/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ridesim {

namespace {

std::uint64_t pair_key(EdgeIndex a, EdgeIndex b)
{
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x)
{
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

} // namespace

double TurnCostModel::cost(TurnKind kind) const
{
    switch (kind) {
    case TurnKind::Straight:
        return straight_s;
    case TurnKind::Right:
        return right_s;
    case TurnKind::Left:
        return left_s;
    case TurnKind::UTurn:
        return uturn_s;
    }
    return 0.0;
}

RoadGraph::RoadGraph(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges, std::vector<TurnPenaltySpec> turns)
{
    std::sort(nodes.begin(), nodes.end(), [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });
    nodes_.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i > 0 && nodes[i].id == nodes[i - 1].id) {
            throw GraphError("duplicate node id " + std::to_string(nodes[i].id));
        }
        if (!is_finite(nodes[i].pos) || std::abs(nodes[i].pos.lat) > 90.0 || std::abs(nodes[i].pos.lon) > 180.0) {
            throw GraphError("node " + std::to_string(nodes[i].id) + " has invalid coordinates");
        }
        nodes_.push_back({nodes[i].id, nodes[i].pos});
    }

    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        const std::string name = "edge " + std::to_string(e.id);
        if (edge_by_id_.contains(e.id)) {
            throw GraphError("duplicate " + name);
        }
        const auto from = find_node(e.from);
        const auto to = find_node(e.to);
        if (!from) {
            throw GraphError(name + " references unknown node " + std::to_string(e.from));
        }
        if (!to) {
            throw GraphError(name + " references unknown node " + std::to_string(e.to));
        }
        if (!(e.length_m > 0.0) || !std::isfinite(e.length_m)) {
            throw GraphError(name + " must have positive length");
        }
        if (!(e.speed_mps > 0.0) || !std::isfinite(e.speed_mps)) {
            throw GraphError(name + " must have positive speed");
        }
        edge_by_id_.emplace(e.id, static_cast<EdgeIndex>(edges_.size()));
        edges_.push_back({e.id, *from, *to, e.length_m, e.speed_mps});
        max_speed_ = std::max(max_speed_, e.speed_mps);
    }

    for (const auto& t : turns) {
        const auto in = find_edge(t.from_edge);
        const auto out = find_edge(t.to_edge);
        if (!in || !out) {
            throw GraphError("turn penalty references unknown edge " +
                             std::to_string(!in ? t.from_edge : t.to_edge));
        }
        if (edges_[*in].to != edges_[*out].from) {
            throw GraphError("turn penalty from edge " + std::to_string(t.from_edge) + " to edge " +
                             std::to_string(t.to_edge) + " does not share a node");
        }
        if (!(t.seconds >= 0.0) || !std::isfinite(t.seconds)) {
            throw GraphError("turn penalty from edge " + std::to_string(t.from_edge) + " must be >= 0");
        }
        explicit_lookup_[pair_key(*in, *out)] = t.seconds;
        explicit_turns_.push_back(t);
    }

    build_adjacency();
    resolve_turns(nullptr);

    std::vector<std::size_t> parent(nodes_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    for (const auto& e : edges_) {
        const auto a = find_root(parent, e.from);
        const auto b = find_root(parent, e.to);
        if (a != b) {
            parent[a] = b;
        }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (find_root(parent, i) == i) {
            ++components_;
        }
    }
}

void RoadGraph::build_adjacency()
{
    out_offsets_.assign(nodes_.size() + 1, 0);
    for (const auto& e : edges_) {
        ++out_offsets_[e.from + 1];
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
    }
    out_list_.assign(edges_.size(), 0);
    std::vector<std::uint32_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
    for (EdgeIndex i = 0; i < edges_.size(); ++i) {
        out_list_[fill[edges_[i].from]++] = i;
    }
}

void RoadGraph::resolve_turns(const TurnCostModel* model)
{
    turn_offsets_.assign(edges_.size() + 1, 0);
    for (EdgeIndex i = 0; i < edges_.size(); ++i) {
        turn_offsets_[i + 1] = turn_offsets_[i] + static_cast<std::uint32_t>(out_edges(edges_[i].to).size());
    }
    turn_cost_.assign(turn_offsets_.back(), 0.0);
    for (EdgeIndex i = 0; i < edges_.size(); ++i) {
        const auto outs = out_edges(edges_[i].to);
        for (std::size_t k = 0; k < outs.size(); ++k) {
            double cost = 0.0;
            if (auto it = explicit_lookup_.find(pair_key(i, outs[k])); it != explicit_lookup_.end()) {
                cost = it->second;
            } else if (model != nullptr) {
                cost = model->cost(classify_turn(*this, i, outs[k]));
            }
            turn_cost_[turn_offsets_[i] + k] = cost;
        }
    }
}

RoadGraph RoadGraph::with_turn_model(const TurnCostModel& model) const
{
    RoadGraph copy = *this;
    copy.resolve_turns(&model);
    return copy;
}

std::span<const EdgeIndex> RoadGraph::out_edges(NodeIndex n) const
{
    return std::span<const EdgeIndex>(out_list_).subspan(out_offsets_[n], out_offsets_[n + 1] - out_offsets_[n]);
}

std::span<const double> RoadGraph::turn_penalties_from(EdgeIndex in) const
{
    return std::span<const double>(turn_cost_).subspan(turn_offsets_[in], turn_offsets_[in + 1] - turn_offsets_[in]);
}

double RoadGraph::turn_penalty(EdgeIndex in, EdgeIndex out) const
{
    const auto outs = out_edges(edges_[in].to);
    const auto costs = turn_penalties_from(in);
    for (std::size_t k = 0; k < outs.size(); ++k) {
        if (outs[k] == out) {
            return costs[k];
        }
    }
    return 0.0;
}

std::optional<NodeIndex> RoadGraph::find_node(std::int64_t id) const
{
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id, [](const Node& n, std::int64_t v) { return n.id < v; });
    if (it == nodes_.end() || it->id != id) {
        return std::nullopt;
    }
    return static_cast<NodeIndex>(it - nodes_.begin());
}

std::optional<EdgeIndex> RoadGraph::find_edge(std::int64_t id) const
{
    if (auto it = edge_by_id_.find(id); it != edge_by_id_.end()) {
        return it->second;
    }
    return std::nullopt;
}

TurnKind classify_turn(const RoadGraph& graph, EdgeIndex in, EdgeIndex out)
{
    const Edge& a = graph.edge(in);
    const Edge& b = graph.edge(out);
    if (b.to == a.from) {
        return TurnKind::UTurn;
    }
    const double h_in = bearing_deg(graph.node(a.from).pos, graph.node(a.to).pos);
    const double h_out = bearing_deg(graph.node(b.from).pos, graph.node(b.to).pos);
    double angle = h_out - h_in;
    while (angle > 180.0) {
        angle -= 360.0;
    }
    while (angle <= -180.0) {
        angle += 360.0;
    }
    if (std::abs(angle) > 150.0) {
        return TurnKind::UTurn;
    }
    if (angle < -30.0) {
        return TurnKind::Left;
    }
    if (angle > 30.0) {
        return TurnKind::Right;
    }
    return TurnKind::Straight;
}

namespace {

std::size_t line_of_byte(std::string_view text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

template <typename T>
T require(const nlohmann::json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw GraphError(where + ": missing field '" + key + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw GraphError(where + ": field '" + key + "' has the wrong type");
    }
}

} // namespace

RoadGraph parse_network(std::string_view json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw GraphError("network parse error at line " + std::to_string(line_of_byte(json_text, e.byte)) + ": " +
                         e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges") || !doc["nodes"].is_array() ||
        !doc["edges"].is_array()) {
        throw GraphError("network must be an object with 'nodes' and 'edges' arrays");
    }
    std::vector<NodeSpec> nodes;
    for (std::size_t i = 0; i < doc["nodes"].size(); ++i) {
        const auto& n = doc["nodes"][i];
        const std::string where = "nodes[" + std::to_string(i) + "]";
        nodes.push_back({require<std::int64_t>(n, "id", where),
                         {require<double>(n, "lat", where), require<double>(n, "lon", where)}});
    }
    std::vector<EdgeSpec> edges;
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
        const auto& e = doc["edges"][i];
        const std::string where = e.is_object() && e.contains("id") && e["id"].is_number_integer()
                                      ? "edge " + std::to_string(e["id"].get<std::int64_t>())
                                      : "edges[" + std::to_string(i) + "]";
        edges.push_back({require<std::int64_t>(e, "id", where), require<std::int64_t>(e, "from", where),
                         require<std::int64_t>(e, "to", where), require<double>(e, "length_m", where),
                         require<double>(e, "speed_mps", where)});
    }
    std::vector<TurnPenaltySpec> turns;
    if (doc.contains("turn_penalties")) {
        if (!doc["turn_penalties"].is_array()) {
            throw GraphError("'turn_penalties' must be an array");
        }
        for (std::size_t i = 0; i < doc["turn_penalties"].size(); ++i) {
            const auto& t = doc["turn_penalties"][i];
            const std::string where = "turn_penalties[" + std::to_string(i) + "]";
            turns.push_back({require<std::int64_t>(t, "from_edge", where), require<std::int64_t>(t, "to_edge", where),
                             require<double>(t, "seconds", where)});
        }
    }
    return RoadGraph(std::move(nodes), std::move(edges), std::move(turns));
}

RoadGraph load_network(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw GraphError("cannot open network file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

std::string network_to_json(const RoadGraph& graph)
{
    nlohmann::ordered_json doc;
    doc["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : graph.nodes()) {
        doc["nodes"].push_back({{"id", n.id}, {"lat", n.pos.lat}, {"lon", n.pos.lon}});
    }
    doc["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges()) {
        doc["edges"].push_back({{"id", e.id},
                                {"from", graph.node(e.from).id},
                                {"to", graph.node(e.to).id},
                                {"length_m", e.length_m},
                                {"speed_mps", e.speed_mps}});
    }
    if (!graph.explicit_turn_penalties().empty()) {
        doc["turn_penalties"] = nlohmann::ordered_json::array();
        for (const auto& t : graph.explicit_turn_penalties()) {
            doc["turn_penalties"].push_back({{"from_edge", t.from_edge}, {"to_edge", t.to_edge}, {"seconds", t.seconds}});
        }
    }
    return doc.dump(1);
}

NodeIndex nearest_node(const RoadGraph& graph, LatLon location)
{
    if (graph.empty()) {
        throw GraphError("nearest_node on an empty graph");
    }
    NodeIndex best = 0;
    double best_d = haversine_m(graph.node(0).pos, location);
    for (NodeIndex i = 1; i < graph.node_count(); ++i) {
        const double d = haversine_m(graph.node(i).pos, location);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace ridesim
