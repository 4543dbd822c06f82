#pragma once

#include "ridesim/timeutil.hpp"

#include <cstdint>
#include <map>
#include <queue>
#include <utility>
#include <vector>

namespace ridesim {

/// Processing priority among events at the same instant follows declaration order.
enum class EventKind : std::uint8_t {
    OrderIssued,
    AssignmentDelivered,
    VehicleArrived,
    DwellComplete,
    PassengerBoarded,
    PassengerAlighted,
    RebalanceDecision,
    LocationUpdate,
};

const char* event_kind_name(EventKind k);

struct SimEvent {
    SimTime time = 0;
    EventKind kind = EventKind::OrderIssued;
    std::uint32_t subject = 0; // vehicle index, or order index for OrderIssued
    std::uint64_t seq = 0;     // assigned by the queue
    std::uint64_t token = 0;   // trip token for arrivals, sender for messages
    std::uint32_t payload = 0; // order index where relevant
};

/// Min-queue on (time, kind, subject, insertion sequence).
class EventQueue {
public:
    void push(SimEvent e);
    SimEvent pop();
    [[nodiscard]] bool empty() const { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const { return heap_.size(); }
    [[nodiscard]] std::uint64_t pushed() const { return next_seq_; }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const;
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t next_seq_ = 0;
};

/// Latency model standing in for the cellular link between dispatcher and
/// vehicles. Deliveries on one sender/receiver pair never overtake each other.
class MessageBus {
public:
    explicit MessageBus(SimTime latency_ms = 1000) : latency_ms_(latency_ms) {}

    /// Schedules `kind` for receiver `to` at now + latency (later if an
    /// earlier message on the same pair is still in flight) and returns it.
    SimEvent deliver_message(EventQueue& queue, EventKind kind, std::uint32_t payload, std::uint32_t from,
                             std::uint32_t to, SimTime now);

    [[nodiscard]] SimTime latency_ms() const { return latency_ms_; }

private:
    SimTime latency_ms_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, SimTime> last_delivery_;
};

} // namespace ridesim
