#pragma once

#include "ridesim/event_queue.hpp"
#include "ridesim/hotspots.hpp"
#include "ridesim/logbook_generator.hpp"
#include "ridesim/road_graph.hpp"
#include "ridesim/routing.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ridesim {

enum class Strategy { Return, Wait, Hotspot };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view text);

enum class VehicleState {
    IdleAtPoB,
    EnRouteToPickup,
    DwellAtPickup,
    InRide,
    DwellAtDropoff,
    RebalancingToPoB,
    RebalancingToHotspot,
    WaitingAtDropoff,
    WaitingAtHotspot,
};

std::string_view vehicle_state_name(VehicleState s);

/// Whether the state machine permits `from` -> `to`.
bool transition_allowed(VehicleState from, VehicleState to);

struct ScenarioConfig {
    Strategy strategy = Strategy::Return;
    LatLon pob{52.5285, 13.3532};
    double min_dwell_s = 30.0;
    double message_latency_s = 1.0;
    double hotspot_wait_probability = 0.2;
    std::uint64_t seed = 1;
    SpeedProfile profile;
    std::shared_ptr<const HotspotSet> hotspots; // required for Strategy::Hotspot
    double wall_clock_budget_s = 120.0;
    bool record_trace = false;

    /// Throws ConfigError on negative dwell/latency, a probability outside
    /// [0, 1] or a Hotspot strategy without hotspots.
    void validate() const;
};

enum class TripReason { Pickup, Ride, Rebalancing };

std::string_view trip_reason_name(TripReason r);
std::optional<TripReason> parse_trip_reason(std::string_view text);

/// One vehicle movement. Distances are integer millimetres and times integer
/// milliseconds so that sums are exact.
struct TripLog {
    std::string vehicle_id;
    TripReason reason = TripReason::Pickup;
    std::string order_id; // empty for rebalancing
    std::string shift_id;
    SimTime start_ms = 0;
    SimTime end_ms = 0;
    LatLon start_pos;
    LatLon end_pos;
    Route route;
    std::int64_t distance_mm = 0;

    [[nodiscard]] SimTime duration_ms() const { return end_ms - start_ms; }
    [[nodiscard]] double distance_m() const { return static_cast<double>(distance_mm) / 1000.0; }
};

std::int64_t to_mm(double meters);
SimTime to_ms(double seconds);

enum class OrderStatus { Served, Unroutable };

struct OrderOutcome {
    std::string order_id;
    std::string vehicle_id;
    std::string shift_id;
    OrderStatus status = OrderStatus::Served;
    SimTime order_ms = 0;
    SimTime delivered_ms = 0;
    SimTime pickup_arrival_ms = 0;
    SimTime pickup_ms = 0;  // passenger boards: departure after the pickup dwell
    SimTime dropoff_ms = 0; // arrival at the dropoff
    Timestamp reference_pickup;
    Timestamp reference_dropoff;
    std::string note;
};

struct ShiftSummary {
    std::string shift_id;
    std::string vehicle_id;
    std::size_t orders = 0;
    std::size_t served = 0;
    SimTime start_ms = 0; // first pickup-leg departure
    SimTime end_ms = 0;   // arrival of the shift's last trip
    std::int64_t pickup_mm = 0;
    std::int64_t ride_mm = 0;
    std::int64_t rebalancing_mm = 0;

    [[nodiscard]] SimTime duration_ms() const { return end_ms - start_ms; }
    [[nodiscard]] std::int64_t total_mm() const { return pickup_mm + ride_mm + rebalancing_mm; }
};

struct TraceEntry {
    SimTime time = 0;
    EventKind kind = EventKind::OrderIssued;
    std::uint32_t subject = 0;
    std::string detail;
};

struct SimOutput {
    std::vector<TripLog> trips;
    std::vector<OrderOutcome> orders; // logbook order
    std::vector<ShiftSummary> shifts;
    std::vector<TraceEntry> trace;
    std::vector<std::string> warnings;
    std::uint64_t events_processed = 0;
    std::int32_t utc_offset_s = 0;
};

/// Read-only view of the fleet handed to a dispatcher.
struct FleetView {
    std::span<const std::string> vehicle_ids;
    std::span<const VehicleState> states;
};

class Dispatcher {
public:
    virtual ~Dispatcher() = default;
    /// Index into FleetView::vehicle_ids of the vehicle serving `order`.
    [[nodiscard]] virtual std::size_t assign(const RideOrder& order, const FleetView& fleet) const = 0;
};

/// Keeps the assignment recorded in the logbook.
class LogbookDispatcher final : public Dispatcher {
public:
    [[nodiscard]] std::size_t assign(const RideOrder& order, const FleetView& fleet) const override;
};

/// Throws DataError when the order's vehicle is not part of the fleet.
std::size_t dispatch_order(const RideOrder& order, const FleetView& fleet, const Dispatcher& dispatcher);

enum class RebalanceKind { GoToPoB, Stay, GoToHotspot };

struct RebalanceAction {
    RebalanceKind kind = RebalanceKind::Stay;
    int hotspot_id = -1;

    friend bool operator==(const RebalanceAction&, const RebalanceAction&) = default;
};

/// What a vehicle does after a dropoff with nothing queued. Only the Hotspot
/// strategy draws from `rng`.
RebalanceAction decide_rebalancing(const ScenarioConfig& config, VehicleState state, LatLon dropoff,
                                   std::mt19937_64& rng);

/// Per-vehicle random stream for rebalancing decisions.
std::mt19937_64 rebalancing_stream(std::uint64_t seed, std::string_view vehicle_id);

struct Diversion {
    Route driven;                  // the part of the interrupted trip already driven
    LatLon position;               // where the vehicle is now
    std::optional<Route> to_pickup; // std::nullopt when the pickup is unreachable
};

/// Interrupts a vehicle `elapsed_s` into `current` and routes it to `pickup`
/// from that exact point (mid-edge positions keep their offset).
Diversion divert_vehicle(const RoadGraph& graph, const Route& current, double elapsed_s, NodeIndex pickup,
                         double departure_s, const SpeedProfile& profile);

class SimulationAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs one simulated day. `graph` must already carry the turn penalties to
/// use. Throws SimulationAborted when the wall-clock budget runs out.
SimOutput run_simulation(const ScenarioConfig& config, const SyntheticLogbook& logbook, const RoadGraph& graph,
                         const Dispatcher& dispatcher = LogbookDispatcher{});

} // namespace ridesim
