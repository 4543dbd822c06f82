#include "ridesim/travel_model.hpp"

#include "ridesim/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ridesim {

namespace {

std::uint64_t cell_key(long cx, long cy)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
}

} // namespace

NodeLocator::NodeLocator(const RoadGraph& graph, double cell_m) : graph_(&graph), cell_m_(cell_m)
{
    if (graph.empty()) {
        return;
    }
    double lat_sum = 0.0, lon_sum = 0.0;
    for (const auto& n : graph.nodes()) {
        lat_sum += n.pos.lat;
        lon_sum += n.pos.lon;
    }
    ref_ = {lat_sum / static_cast<double>(graph.node_count()), lon_sum / static_cast<double>(graph.node_count())};
    cos_ref_ = std::cos(deg2rad(ref_.lat));
    bool first = true;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        const auto [cx, cy] = cell_of(graph.node(i).pos);
        cells_[cell_key(cx, cy)].push_back(i);
        if (first) {
            min_cx_ = max_cx_ = cx;
            min_cy_ = max_cy_ = cy;
            first = false;
        }
        min_cx_ = std::min(min_cx_, cx);
        max_cx_ = std::max(max_cx_, cx);
        min_cy_ = std::min(min_cy_, cy);
        max_cy_ = std::max(max_cy_, cy);
    }
}

std::pair<long, long> NodeLocator::cell_of(LatLon p) const
{
    const double x = deg2rad(p.lon - ref_.lon) * kEarthRadiusM * cos_ref_;
    const double y = deg2rad(p.lat - ref_.lat) * kEarthRadiusM;
    return {static_cast<long>(std::floor(x / cell_m_)), static_cast<long>(std::floor(y / cell_m_))};
}

NodeIndex NodeLocator::nearest(LatLon location) const
{
    if (graph_->empty()) {
        throw GraphError("nearest node lookup on an empty graph");
    }
    const auto [qx, qy] = cell_of(location);
    NodeIndex best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    const long max_ring = std::max({std::abs(qx - min_cx_), std::abs(qx - max_cx_), std::abs(qy - min_cy_),
                                    std::abs(qy - max_cy_)}) + 1;
    for (long ring = 0; ring <= max_ring; ++ring) {
        // Everything outside ring r-1 is at least (r-1) cells away in the
        // projection; the 0.9 factor absorbs projection vs great-circle error.
        if (best_d < std::numeric_limits<double>::infinity() &&
            static_cast<double>(ring - 1) * cell_m_ * 0.9 > best_d) {
            break;
        }
        for (long dx = -ring; dx <= ring; ++dx) {
            for (long dy = -ring; dy <= ring; ++dy) {
                if (std::max(std::abs(dx), std::abs(dy)) != ring) {
                    continue;
                }
                auto it = cells_.find(cell_key(qx + dx, qy + dy));
                if (it == cells_.end()) {
                    continue;
                }
                for (NodeIndex n : it->second) {
                    const double d = haversine_m(graph_->node(n).pos, location);
                    if (d < best_d || (d == best_d && n < best)) {
                        best_d = d;
                        best = n;
                    }
                }
            }
        }
    }
    return best;
}

std::optional<LegEstimate> CrowFlyTravelModel::leg(LatLon from, LatLon to) const
{
    const double d = haversine_m(from, to) * detour_;
    return LegEstimate{d, d / speed_};
}

NetworkTravelModel::NetworkTravelModel(std::shared_ptr<const RoadGraph> graph, double speed_factor)
    : graph_(std::move(graph)), locator_(*graph_), factor_(speed_factor), rows_(graph_->node_count())
{
}

std::optional<LegEstimate> NetworkTravelModel::node_leg(NodeIndex from, NodeIndex to) const
{
    std::shared_ptr<const std::vector<PathCost>> row;
    {
        std::lock_guard lock(mutex_);
        row = rows_[from];
    }
    if (!row) {
        auto computed = std::make_shared<const std::vector<PathCost>>(fastest_costs_from(*graph_, from, factor_));
        std::lock_guard lock(mutex_);
        if (!rows_[from]) {
            rows_[from] = computed;
        }
        row = rows_[from];
    }
    const PathCost& c = (*row)[to];
    if (!c.reachable) {
        return std::nullopt;
    }
    return LegEstimate{c.length_m, c.time_s};
}

std::optional<LegEstimate> NetworkTravelModel::leg(LatLon from, LatLon to) const
{
    return node_leg(locator_.nearest(from), locator_.nearest(to));
}

} // namespace ridesim
