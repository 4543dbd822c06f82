#pragma once

#include "ridesim/geo.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ridesim {

using NodeIndex = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct Node {
    std::int64_t id = 0;
    LatLon pos;
};

struct Edge {
    std::int64_t id = 0;
    NodeIndex from = 0;
    NodeIndex to = 0;
    double length_m = 0.0;
    double speed_mps = 0.0;
};

struct NodeSpec {
    std::int64_t id = 0;
    LatLon pos;
};

struct EdgeSpec {
    std::int64_t id = 0;
    std::int64_t from = 0;
    std::int64_t to = 0;
    double length_m = 0.0;
    double speed_mps = 0.0;
};

struct TurnPenaltySpec {
    std::int64_t from_edge = 0;
    std::int64_t to_edge = 0;
    double seconds = 0.0;
};

enum class TurnKind { Straight, Right, Left, UTurn };

/// Penalty per geometric turn class for right-hand traffic.
struct TurnCostModel {
    double straight_s = 0.0;
    double right_s = 0.0;
    double left_s = 15.0;
    double uturn_s = 30.0;

    [[nodiscard]] double cost(TurnKind kind) const;
};

/// Directed road network. Immutable once built; all queries are const and
/// safe to share across threads.
///
/// Nodes are stored sorted by id, so node indices order the same way as ids.
/// Edges keep input order.
class RoadGraph {
public:
    RoadGraph() = default;

    /// Validates and builds. Throws GraphError on duplicate ids, dangling
    /// references, non-positive length or speed, or turn penalties between
    /// edges that do not meet at a node.
    RoadGraph(std::vector<NodeSpec> nodes, std::vector<EdgeSpec> edges, std::vector<TurnPenaltySpec> turns = {});

    [[nodiscard]] std::span<const Node> nodes() const { return nodes_; }
    [[nodiscard]] std::span<const Edge> edges() const { return edges_; }
    [[nodiscard]] const Node& node(NodeIndex i) const { return nodes_[i]; }
    [[nodiscard]] const Edge& edge(EdgeIndex i) const { return edges_[i]; }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] bool empty() const { return nodes_.empty(); }

    [[nodiscard]] std::span<const EdgeIndex> out_edges(NodeIndex n) const;

    /// Penalties for continuing from `in` onto each edge of out_edges(edge(in).to), same order.
    [[nodiscard]] std::span<const double> turn_penalties_from(EdgeIndex in) const;
    [[nodiscard]] double turn_penalty(EdgeIndex in, EdgeIndex out) const;

    [[nodiscard]] const std::vector<TurnPenaltySpec>& explicit_turn_penalties() const { return explicit_turns_; }

    /// Copy whose unlisted turn pairs are charged by geometric class. Pairs listed
    /// explicitly in the network file keep their value.
    [[nodiscard]] RoadGraph with_turn_model(const TurnCostModel& model) const;

    [[nodiscard]] std::optional<NodeIndex> find_node(std::int64_t id) const;
    [[nodiscard]] std::optional<EdgeIndex> find_edge(std::int64_t id) const;

    /// Number of weakly connected components (1 for a connected network).
    [[nodiscard]] std::size_t component_count() const { return components_; }

    [[nodiscard]] double max_speed_mps() const { return max_speed_; }

private:
    void build_adjacency();
    void resolve_turns(const TurnCostModel* model);

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_offsets_;
    std::vector<EdgeIndex> out_list_;
    std::vector<double> turn_cost_; // aligned with out_list_ slices of each edge's head
    std::vector<std::uint32_t> turn_offsets_;
    std::vector<TurnPenaltySpec> explicit_turns_;
    std::unordered_map<std::uint64_t, double> explicit_lookup_;
    std::unordered_map<std::int64_t, EdgeIndex> edge_by_id_;
    std::size_t components_ = 0;
    double max_speed_ = 0.0;
};

TurnKind classify_turn(const RoadGraph& graph, EdgeIndex in, EdgeIndex out);

/// Reads the JSON network format. Parse errors carry the line number;
/// integrity errors name the offending edge.
RoadGraph load_network(const std::string& path);
RoadGraph parse_network(std::string_view json_text);

/// Serializes in the same format load_network reads (explicit turn penalties only).
std::string network_to_json(const RoadGraph& graph);

/// Node minimizing great-circle distance; ties go to the lowest node id.
/// Throws GraphError on an empty graph.
NodeIndex nearest_node(const RoadGraph& graph, LatLon location);

} // namespace ridesim
