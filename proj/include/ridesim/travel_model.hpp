#pragma once

#include "ridesim/road_graph.hpp"
#include "ridesim/routing.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ridesim {

/// Grid-bucketed nearest-node lookup. Returns exactly what nearest_node()
/// returns (same metric, same lowest-id tie-break), only faster.
class NodeLocator {
public:
    explicit NodeLocator(const RoadGraph& graph, double cell_m = 500.0);

    [[nodiscard]] NodeIndex nearest(LatLon location) const;

private:
    [[nodiscard]] std::pair<long, long> cell_of(LatLon p) const;

    const RoadGraph* graph_;
    LatLon ref_;
    double cos_ref_ = 1.0;
    double cell_m_;
    std::unordered_map<std::uint64_t, std::vector<NodeIndex>> cells_;
    long min_cx_ = 0, max_cx_ = 0, min_cy_ = 0, max_cy_ = 0;
};

struct LegEstimate {
    double length_m = 0.0;
    double time_s = 0.0;
};

/// Point-to-point driving estimate used by static analysis and demand synthesis.
class TravelModel {
public:
    virtual ~TravelModel() = default;
    [[nodiscard]] virtual std::optional<LegEstimate> leg(LatLon from, LatLon to) const = 0;
};

/// Straight-line distance times a detour factor at a constant speed.
class CrowFlyTravelModel final : public TravelModel {
public:
    CrowFlyTravelModel(double detour_factor = 1.3, double speed_mps = 8.0)
        : detour_(detour_factor), speed_(speed_mps)
    {
    }
    [[nodiscard]] std::optional<LegEstimate> leg(LatLon from, LatLon to) const override;

private:
    double detour_;
    double speed_;
};

/// Fastest paths through an empty network (fixed speed factor), endpoints
/// snapped to their nearest nodes. Per-origin results are cached; safe for
/// concurrent use.
class NetworkTravelModel final : public TravelModel {
public:
    explicit NetworkTravelModel(std::shared_ptr<const RoadGraph> graph, double speed_factor = 1.0);

    [[nodiscard]] std::optional<LegEstimate> leg(LatLon from, LatLon to) const override;
    [[nodiscard]] std::optional<LegEstimate> node_leg(NodeIndex from, NodeIndex to) const;
    [[nodiscard]] NodeIndex snap(LatLon p) const { return locator_.nearest(p); }
    [[nodiscard]] const RoadGraph& graph() const { return *graph_; }

private:
    std::shared_ptr<const RoadGraph> graph_;
    NodeLocator locator_;
    double factor_;
    mutable std::mutex mutex_;
    mutable std::vector<std::shared_ptr<const std::vector<PathCost>>> rows_;
};

} // namespace ridesim
