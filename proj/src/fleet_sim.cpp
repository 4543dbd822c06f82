#include "ridesim/fleet_sim.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"
#include "ridesim/event_queue.hpp"
#include "ridesim/random.hpp"
#include "ridesim/travel_model.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

namespace ridesim {

std::string_view strategy_name(Strategy s)
{
    switch (s) {
    case Strategy::Return: return "return";
    case Strategy::Wait: return "wait";
    case Strategy::Hotspot: return "hotspot";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text)
{
    std::string t(text);
    for (auto& c : t) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (t == "return") {
        return Strategy::Return;
    }
    if (t == "wait") {
        return Strategy::Wait;
    }
    if (t == "hotspot") {
        return Strategy::Hotspot;
    }
    return std::nullopt;
}

std::string_view vehicle_state_name(VehicleState s)
{
    switch (s) {
    case VehicleState::IdleAtPoB: return "IdleAtPoB";
    case VehicleState::EnRouteToPickup: return "EnRouteToPickup";
    case VehicleState::DwellAtPickup: return "DwellAtPickup";
    case VehicleState::InRide: return "InRide";
    case VehicleState::DwellAtDropoff: return "DwellAtDropoff";
    case VehicleState::RebalancingToPoB: return "RebalancingToPoB";
    case VehicleState::RebalancingToHotspot: return "RebalancingToHotspot";
    case VehicleState::WaitingAtDropoff: return "WaitingAtDropoff";
    case VehicleState::WaitingAtHotspot: return "WaitingAtHotspot";
    }
    return "?";
}

bool transition_allowed(VehicleState from, VehicleState to)
{
    using S = VehicleState;
    switch (to) {
    case S::EnRouteToPickup:
        return from == S::IdleAtPoB || from == S::DwellAtDropoff || from == S::RebalancingToPoB ||
               from == S::RebalancingToHotspot || from == S::WaitingAtDropoff || from == S::WaitingAtHotspot;
    case S::DwellAtPickup: return from == S::EnRouteToPickup;
    case S::InRide: return from == S::DwellAtPickup;
    case S::DwellAtDropoff: return from == S::InRide;
    case S::RebalancingToPoB:
    case S::RebalancingToHotspot:
    case S::WaitingAtDropoff: return from == S::DwellAtDropoff;
    case S::IdleAtPoB: return from == S::RebalancingToPoB;
    case S::WaitingAtHotspot: return from == S::RebalancingToHotspot;
    }
    return false;
}

void ScenarioConfig::validate() const
{
    if (!(min_dwell_s >= 0.0)) {
        throw ConfigError("min_dwell must be >= 0");
    }
    if (!(message_latency_s >= 0.0)) {
        throw ConfigError("message_latency must be >= 0");
    }
    if (!(hotspot_wait_probability >= 0.0 && hotspot_wait_probability <= 1.0)) {
        throw ConfigError("hotspot_wait_probability must lie in [0, 1]");
    }
    if (!is_finite(pob)) {
        throw ConfigError("pob location is not finite");
    }
    if (strategy == Strategy::Hotspot && (!hotspots || hotspots->empty())) {
        throw ConfigError("hotspot strategy requires a non-empty hotspot set");
    }
}

std::string_view trip_reason_name(TripReason r)
{
    switch (r) {
    case TripReason::Pickup: return "pickup";
    case TripReason::Ride: return "ride";
    case TripReason::Rebalancing: return "rebalancing";
    }
    return "?";
}

std::optional<TripReason> parse_trip_reason(std::string_view text)
{
    if (text == "pickup") {
        return TripReason::Pickup;
    }
    if (text == "ride") {
        return TripReason::Ride;
    }
    if (text == "rebalancing") {
        return TripReason::Rebalancing;
    }
    return std::nullopt;
}

std::int64_t to_mm(double meters)
{
    return std::llround(meters * 1000.0);
}

SimTime to_ms(double seconds)
{
    return std::llround(seconds * 1000.0);
}

std::size_t LogbookDispatcher::assign(const RideOrder& order, const FleetView& fleet) const
{
    for (std::size_t i = 0; i < fleet.vehicle_ids.size(); ++i) {
        if (fleet.vehicle_ids[i] == order.vehicle_id) {
            return i;
        }
    }
    throw DataError("order " + order.order_id + " is assigned to unknown vehicle '" + order.vehicle_id + "'");
}

std::size_t dispatch_order(const RideOrder& order, const FleetView& fleet, const Dispatcher& dispatcher)
{
    const std::size_t v = dispatcher.assign(order, fleet);
    if (v >= fleet.vehicle_ids.size()) {
        throw DataError("dispatcher returned an unknown vehicle for order " + order.order_id);
    }
    return v;
}

std::mt19937_64 rebalancing_stream(std::uint64_t seed, std::string_view vehicle_id)
{
    return std::mt19937_64(stream_seed(seed, std::string("rebalance/") + std::string(vehicle_id)));
}

RebalanceAction decide_rebalancing(const ScenarioConfig& config, VehicleState /*state*/, LatLon dropoff,
                                   std::mt19937_64& rng)
{
    switch (config.strategy) {
    case Strategy::Return: return {RebalanceKind::GoToPoB, -1};
    case Strategy::Wait: return {RebalanceKind::Stay, -1};
    case Strategy::Hotspot:
        if (!config.hotspots || config.hotspots->empty()) {
            throw ConfigError("hotspot strategy requires a non-empty hotspot set");
        }
        if (bernoulli(rng, config.hotspot_wait_probability)) {
            return {RebalanceKind::Stay, -1};
        }
        return {RebalanceKind::GoToHotspot, nearest_hotspot(*config.hotspots, dropoff)};
    }
    return {};
}

Diversion divert_vehicle(const RoadGraph& graph, const Route& current, double elapsed_s, NodeIndex pickup,
                         double departure_s, const SpeedProfile& profile)
{
    Diversion d;
    if (current.empty()) {
        d.to_pickup = std::nullopt;
        return d;
    }
    const RoutePosition pos = position_at(graph, current, std::min(elapsed_s, current.total_time_s));
    d.driven = truncate_route(graph, current, pos);
    d.position = pos.where;
    if (pos.at_origin) {
        d.to_pickup = fastest_path(graph, route_origin(graph, current), pickup, departure_s, profile);
    } else {
        d.to_pickup = fastest_path_from_edge(graph, current.edges[pos.edge_pos], pos.along_m, pickup, departure_s,
                                             profile);
    }
    return d;
}

namespace {

constexpr std::uint32_t kDispatcher = std::numeric_limits<std::uint32_t>::max();

struct OrderRec {
    const RideOrder* ride = nullptr;
    std::string shift_id;
    std::size_t vehicle = 0;
    NodeIndex pickup_node = 0;
    NodeIndex dropoff_node = 0;
};

struct Vehicle {
    std::string id;
    VehicleState state = VehicleState::IdleAtPoB;
    NodeIndex node = 0; // valid while not moving
    std::deque<std::uint32_t> pending;
    bool moving = false;
    Route route;
    TripReason reason = TripReason::Pickup;
    int order = -1; // order of the current pickup/ride trip, or last served
    SimTime depart_ms = 0;
    SimTime arrive_ms = 0;
    LatLon start_pos;
    std::uint64_t token = 0;
    std::string last_shift;
    LatLon last_dropoff;
    std::mt19937_64 rng;
};

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, const SyntheticLogbook& book, const RoadGraph& graph,
               const Dispatcher& dispatcher)
        : cfg_(cfg), graph_(graph), dispatcher_(dispatcher), locator_(graph), bus_(to_ms(cfg.message_latency_s))
    {
        cfg_.validate();
        if (graph.empty()) {
            throw GraphError("simulation needs a non-empty road network");
        }
        pob_node_ = locator_.nearest(cfg.pob);
        if (cfg.hotspots) {
            for (const auto& h : cfg.hotspots->hotspots) {
                hotspot_nodes_.push_back(locator_.nearest(h.centroid));
            }
        }
        for (const auto& vs : book.vehicles) {
            Vehicle v;
            v.id = vs.vehicle_id;
            v.node = pob_node_;
            v.last_dropoff = cfg.pob;
            v.rng = rebalancing_stream(cfg.seed, vs.vehicle_id);
            vehicles_.push_back(std::move(v));
            ids_.push_back(vs.vehicle_id);
            for (const auto& s : vs.shifts) {
                for (const auto& r : s.rides) {
                    OrderRec o;
                    o.ride = &r;
                    o.shift_id = s.id;
                    o.pickup_node = locator_.nearest(r.pickup_location);
                    o.dropoff_node = locator_.nearest(r.dropoff_location);
                    orders_.push_back(std::move(o));
                }
            }
        }
        states_.resize(vehicles_.size());
        if (!orders_.empty()) {
            out_.utc_offset_s = orders_.front().ride->order_time.utc_offset_s;
        }
        out_.orders.resize(orders_.size());
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            const RideOrder& r = *orders_[i].ride;
            auto& oc = out_.orders[i];
            oc.order_id = r.order_id;
            oc.vehicle_id = r.vehicle_id;
            oc.shift_id = orders_[i].shift_id;
            oc.order_ms = r.order_time.as_sim_time();
            oc.reference_pickup = r.pickup_time;
            oc.reference_dropoff = r.dropoff_time;
        }
    }

    void run();
    void build_shift_summaries(const SyntheticLogbook& book);
    SimOutput take() { return std::move(out_); }

private:
    [[nodiscard]] double day_seconds(SimTime t) const { return seconds_of_day(t, out_.utc_offset_s); }
    void set_state(Vehicle& v, VehicleState s);
    void trace(const SimEvent& e, std::string detail);
    void start_trip(std::uint32_t vi, TripReason reason, int order, Route route, LatLon start_pos, SimTime now);
    void finish_trip(Vehicle& v, SimTime now, const Route& driven, LatLon end_pos);
    void try_start_pickup(std::uint32_t vi, SimTime now);
    void flag_unroutable(std::uint32_t order, const std::string& why);

    void on_order_issued(const SimEvent& e);
    void on_assignment(const SimEvent& e);
    void on_arrived(const SimEvent& e);
    void on_boarded(const SimEvent& e);
    void on_alighted(const SimEvent& e);
    void on_dwell_complete(const SimEvent& e);
    void on_rebalance(const SimEvent& e);

    ScenarioConfig cfg_;
    const RoadGraph& graph_;
    const Dispatcher& dispatcher_;
    NodeLocator locator_;
    MessageBus bus_;
    EventQueue queue_;
    NodeIndex pob_node_ = 0;
    std::vector<NodeIndex> hotspot_nodes_;
    std::vector<Vehicle> vehicles_;
    std::vector<std::string> ids_;
    std::vector<VehicleState> states_;
    std::vector<OrderRec> orders_;
    SimOutput out_;
};

void Simulation::set_state(Vehicle& v, VehicleState s)
{
    if (!transition_allowed(v.state, s)) {
        throw std::logic_error("vehicle " + v.id + ": illegal transition " + std::string(vehicle_state_name(v.state)) +
                               " -> " + std::string(vehicle_state_name(s)));
    }
    v.state = s;
}

void Simulation::trace(const SimEvent& e, std::string detail)
{
    if (cfg_.record_trace) {
        out_.trace.push_back({e.time, e.kind, e.subject, std::move(detail)});
    }
}

void Simulation::start_trip(std::uint32_t vi, TripReason reason, int order, Route route, LatLon start_pos,
                            SimTime now)
{
    Vehicle& v = vehicles_[vi];
    v.moving = true;
    v.reason = reason;
    v.order = order;
    v.route = std::move(route);
    v.depart_ms = now;
    v.arrive_ms = now + to_ms(v.route.total_time_s);
    v.start_pos = start_pos;
    ++v.token;
    SimEvent e;
    e.time = v.arrive_ms;
    e.kind = EventKind::VehicleArrived;
    e.subject = vi;
    e.token = v.token;
    queue_.push(e);
}

void Simulation::finish_trip(Vehicle& v, SimTime now, const Route& driven, LatLon end_pos)
{
    TripLog t;
    t.vehicle_id = v.id;
    t.reason = v.reason;
    if (v.reason != TripReason::Rebalancing) {
        t.order_id = orders_[static_cast<std::size_t>(v.order)].ride->order_id;
        t.shift_id = orders_[static_cast<std::size_t>(v.order)].shift_id;
    } else {
        t.shift_id = v.last_shift;
    }
    t.start_ms = v.depart_ms;
    t.end_ms = now;
    t.start_pos = v.start_pos;
    t.end_pos = end_pos;
    t.route = driven;
    t.distance_mm = to_mm(driven.total_length_m);
    out_.trips.push_back(std::move(t));
    v.moving = false;
    ++v.token; // any arrival still queued for this trip is now stale
}

void Simulation::flag_unroutable(std::uint32_t order, const std::string& why)
{
    auto& oc = out_.orders[order];
    oc.status = OrderStatus::Unroutable;
    oc.note = why;
    out_.warnings.push_back("order " + oc.order_id + " unroutable: " + why);
}

void Simulation::try_start_pickup(std::uint32_t vi, SimTime now)
{
    Vehicle& v = vehicles_[vi];
    switch (v.state) {
    case VehicleState::IdleAtPoB:
    case VehicleState::WaitingAtDropoff:
    case VehicleState::WaitingAtHotspot:
    case VehicleState::DwellAtDropoff:
    case VehicleState::RebalancingToPoB:
    case VehicleState::RebalancingToHotspot: break;
    default: return; // busy; picked up after the current dropoff
    }
    const double dep = day_seconds(now);
    while (!v.pending.empty()) {
        const std::uint32_t oi = v.pending.front();
        v.pending.pop_front();
        const OrderRec& o = orders_[oi];
        if (!fastest_path(graph_, o.pickup_node, o.dropoff_node, dep, cfg_.profile)) {
            flag_unroutable(oi, "no route from pickup to dropoff");
            continue;
        }
        if (v.moving) {
            const double elapsed =
                now >= v.arrive_ms ? v.route.total_time_s : static_cast<double>(now - v.depart_ms) / 1000.0;
            Diversion d = divert_vehicle(graph_, v.route, elapsed, o.pickup_node, dep, cfg_.profile);
            if (!d.to_pickup) {
                flag_unroutable(oi, "no route from the vehicle to the pickup");
                continue;
            }
            finish_trip(v, now, d.driven, d.position);
            set_state(v, VehicleState::EnRouteToPickup);
            start_trip(vi, TripReason::Pickup, static_cast<int>(oi), std::move(*d.to_pickup), d.position, now);
            return;
        }
        auto route = fastest_path(graph_, v.node, o.pickup_node, dep, cfg_.profile);
        if (!route) {
            flag_unroutable(oi, "no route from the vehicle to the pickup");
            continue;
        }
        set_state(v, VehicleState::EnRouteToPickup);
        start_trip(vi, TripReason::Pickup, static_cast<int>(oi), std::move(*route), graph_.node(v.node).pos, now);
        return;
    }
    if (v.state == VehicleState::DwellAtDropoff) {
        // every queued follow-up failed; fall through to the strategy
        SimEvent e;
        e.time = now;
        e.kind = EventKind::RebalanceDecision;
        e.subject = vi;
        queue_.push(e);
    }
}

void Simulation::on_order_issued(const SimEvent& e)
{
    const RideOrder& r = *orders_[e.subject].ride;
    const FleetView view{ids_, states_};
    const std::size_t v = dispatch_order(r, view, dispatcher_);
    orders_[e.subject].vehicle = v;
    bus_.deliver_message(queue_, EventKind::AssignmentDelivered, e.subject, kDispatcher,
                         static_cast<std::uint32_t>(v), e.time);
    trace(e, r.order_id + " -> " + ids_[v]);
}

void Simulation::on_assignment(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    out_.orders[e.payload].delivered_ms = e.time;
    v.pending.push_back(e.payload);
    trace(e, out_.orders[e.payload].order_id + " state " + std::string(vehicle_state_name(v.state)));
    if (v.state != VehicleState::DwellAtDropoff) {
        try_start_pickup(e.subject, e.time);
    }
}

void Simulation::on_arrived(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    if (!v.moving || e.token != v.token) {
        return;
    }
    const Route driven = v.route;
    const NodeIndex dest = driven.empty() ? v.node : graph_.edge(driven.edges.back()).to;
    finish_trip(v, e.time, driven, graph_.node(dest).pos);
    v.node = dest;
    trace(e, std::string(trip_reason_name(v.reason)));

    switch (v.state) {
    case VehicleState::EnRouteToPickup: {
        set_state(v, VehicleState::DwellAtPickup);
        auto& oc = out_.orders[static_cast<std::size_t>(v.order)];
        oc.pickup_arrival_ms = e.time;
        SimEvent b;
        b.time = std::max(e.time + to_ms(cfg_.min_dwell_s), oc.order_ms);
        b.kind = EventKind::PassengerBoarded;
        b.subject = e.subject;
        b.payload = static_cast<std::uint32_t>(v.order);
        queue_.push(b);
        break;
    }
    case VehicleState::InRide: {
        set_state(v, VehicleState::DwellAtDropoff);
        SimEvent a;
        a.time = e.time;
        a.kind = EventKind::PassengerAlighted;
        a.subject = e.subject;
        a.payload = static_cast<std::uint32_t>(v.order);
        queue_.push(a);
        SimEvent d;
        d.time = e.time + to_ms(cfg_.min_dwell_s);
        d.kind = EventKind::DwellComplete;
        d.subject = e.subject;
        queue_.push(d);
        break;
    }
    case VehicleState::RebalancingToPoB:
        set_state(v, VehicleState::IdleAtPoB);
        try_start_pickup(e.subject, e.time);
        break;
    case VehicleState::RebalancingToHotspot:
        set_state(v, VehicleState::WaitingAtHotspot);
        try_start_pickup(e.subject, e.time);
        break;
    default: throw std::logic_error("arrival in state " + std::string(vehicle_state_name(v.state)));
    }
}

void Simulation::on_boarded(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    const OrderRec& o = orders_[e.payload];
    out_.orders[e.payload].pickup_ms = e.time;
    set_state(v, VehicleState::InRide);
    auto route = fastest_path(graph_, o.pickup_node, o.dropoff_node, day_seconds(e.time), cfg_.profile);
    if (!route) {
        throw std::logic_error("ride route vanished for order " + o.ride->order_id);
    }
    trace(e, o.ride->order_id);
    start_trip(e.subject, TripReason::Ride, static_cast<int>(e.payload), std::move(*route), graph_.node(v.node).pos,
               e.time);
}

void Simulation::on_alighted(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    const OrderRec& o = orders_[e.payload];
    out_.orders[e.payload].dropoff_ms = e.time;
    v.last_shift = o.shift_id;
    v.last_dropoff = o.ride->dropoff_location;
    trace(e, o.ride->order_id);
}

void Simulation::on_dwell_complete(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    trace(e, std::to_string(v.pending.size()) + " queued");
    if (!v.pending.empty()) {
        try_start_pickup(e.subject, e.time);
        return;
    }
    SimEvent r;
    r.time = e.time;
    r.kind = EventKind::RebalanceDecision;
    r.subject = e.subject;
    queue_.push(r);
}

void Simulation::on_rebalance(const SimEvent& e)
{
    Vehicle& v = vehicles_[e.subject];
    if (v.state != VehicleState::DwellAtDropoff) {
        return;
    }
    if (!v.pending.empty()) {
        try_start_pickup(e.subject, e.time);
        if (v.state != VehicleState::DwellAtDropoff) {
            return;
        }
    }
    const RebalanceAction a = decide_rebalancing(cfg_, v.state, v.last_dropoff, v.rng);
    NodeIndex target = v.node;
    VehicleState next = VehicleState::WaitingAtDropoff;
    if (a.kind == RebalanceKind::GoToPoB) {
        target = pob_node_;
        next = VehicleState::RebalancingToPoB;
    } else if (a.kind == RebalanceKind::GoToHotspot) {
        target = hotspot_nodes_.at(static_cast<std::size_t>(a.hotspot_id));
        next = VehicleState::RebalancingToHotspot;
    }
    trace(e, std::string(vehicle_state_name(next)));
    if (next == VehicleState::WaitingAtDropoff) {
        set_state(v, next);
        return;
    }
    auto route = fastest_path(graph_, v.node, target, day_seconds(e.time), cfg_.profile);
    if (!route) {
        out_.warnings.push_back("vehicle " + v.id + ": rebalancing target unreachable, staying");
        set_state(v, VehicleState::WaitingAtDropoff);
        return;
    }
    set_state(v, next);
    start_trip(e.subject, TripReason::Rebalancing, -1, std::move(*route), graph_.node(v.node).pos, e.time);
}

void Simulation::run()
{
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        SimEvent e;
        e.time = orders_[i].ride->order_time.as_sim_time();
        e.kind = EventKind::OrderIssued;
        e.subject = static_cast<std::uint32_t>(i);
        queue_.push(e);
    }
    const auto started = std::chrono::steady_clock::now();
    const auto budget = std::chrono::duration<double>(cfg_.wall_clock_budget_s);
    SimTime last = std::numeric_limits<SimTime>::min();
    while (!queue_.empty()) {
        const SimEvent e = queue_.pop();
        if (e.time < last) {
            throw std::logic_error("event time went backwards");
        }
        last = e.time;
        if ((++out_.events_processed & 1023u) == 0 && std::chrono::steady_clock::now() - started > budget) {
            throw SimulationAborted("wall-clock budget of " + format_fixed(cfg_.wall_clock_budget_s, 1) +
                                    " s exhausted after " + std::to_string(out_.events_processed) +
                                    " events at sim time " + std::to_string(e.time) + " ms, " +
                                    std::to_string(queue_.size()) + " events pending");
        }
        for (std::size_t i = 0; i < vehicles_.size(); ++i) {
            states_[i] = vehicles_[i].state;
        }
        switch (e.kind) {
        case EventKind::OrderIssued: on_order_issued(e); break;
        case EventKind::AssignmentDelivered: on_assignment(e); break;
        case EventKind::VehicleArrived: on_arrived(e); break;
        case EventKind::PassengerBoarded: on_boarded(e); break;
        case EventKind::PassengerAlighted: on_alighted(e); break;
        case EventKind::DwellComplete: on_dwell_complete(e); break;
        case EventKind::RebalanceDecision: on_rebalance(e); break;
        case EventKind::LocationUpdate: break;
        }
    }
    for (const auto& v : vehicles_) {
        if (v.moving || !v.pending.empty()) {
            throw std::logic_error("vehicle " + v.id + " not settled at end of simulation");
        }
    }
}

void Simulation::build_shift_summaries(const SyntheticLogbook& book)
{
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& vs : book.vehicles) {
        for (const auto& s : vs.shifts) {
            index.emplace(s.id, out_.shifts.size());
            ShiftSummary sum;
            sum.shift_id = s.id;
            sum.vehicle_id = vs.vehicle_id;
            sum.orders = s.rides.size();
            sum.start_ms = std::numeric_limits<SimTime>::max();
            sum.end_ms = std::numeric_limits<SimTime>::min();
            out_.shifts.push_back(sum);
        }
    }
    for (const auto& t : out_.trips) {
        const auto it = index.find(t.shift_id);
        if (it == index.end()) {
            continue;
        }
        auto& s = out_.shifts[it->second];
        switch (t.reason) {
        case TripReason::Pickup:
            s.pickup_mm += t.distance_mm;
            s.start_ms = std::min(s.start_ms, t.start_ms);
            break;
        case TripReason::Ride: s.ride_mm += t.distance_mm; break;
        case TripReason::Rebalancing: s.rebalancing_mm += t.distance_mm; break;
        }
        s.end_ms = std::max(s.end_ms, t.end_ms);
    }
    for (const auto& o : out_.orders) {
        if (o.status == OrderStatus::Served) {
            ++out_.shifts[index.at(o.shift_id)].served;
        }
    }
    for (auto& s : out_.shifts) {
        if (s.start_ms == std::numeric_limits<SimTime>::max()) {
            s.start_ms = 0;
            s.end_ms = 0;
        }
    }
}

} // namespace

SimOutput run_simulation(const ScenarioConfig& config, const SyntheticLogbook& logbook, const RoadGraph& graph,
                         const Dispatcher& dispatcher)
{
    Simulation sim(config, logbook, graph, dispatcher);
    sim.run();
    sim.build_shift_summaries(logbook);
    return sim.take();
}

} // namespace ridesim
