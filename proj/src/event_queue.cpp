#include "ridesim/event_queue.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace ridesim {

const char* event_kind_name(EventKind k)
{
    switch (k) {
    case EventKind::OrderIssued: return "OrderIssued";
    case EventKind::AssignmentDelivered: return "AssignmentDelivered";
    case EventKind::VehicleArrived: return "VehicleArrived";
    case EventKind::DwellComplete: return "DwellComplete";
    case EventKind::PassengerBoarded: return "PassengerBoarded";
    case EventKind::PassengerAlighted: return "PassengerAlighted";
    case EventKind::RebalanceDecision: return "RebalanceDecision";
    case EventKind::LocationUpdate: return "LocationUpdate";
    }
    return "?";
}

bool EventQueue::Later::operator()(const SimEvent& a, const SimEvent& b) const
{
    return std::tie(a.time, a.kind, a.subject, a.seq) > std::tie(b.time, b.kind, b.subject, b.seq);
}

void EventQueue::push(SimEvent e)
{
    e.seq = next_seq_++;
    heap_.push(e);
}

SimEvent EventQueue::pop()
{
    if (heap_.empty()) {
        throw std::logic_error("pop from empty event queue");
    }
    SimEvent e = heap_.top();
    heap_.pop();
    return e;
}

SimEvent MessageBus::deliver_message(EventQueue& queue, EventKind kind, std::uint32_t payload, std::uint32_t from,
                                     std::uint32_t to, SimTime now)
{
    const auto key = std::make_pair(from, to);
    SimEvent e;
    e.time = now + latency_ms_;
    if (const auto it = last_delivery_.find(key); it != last_delivery_.end()) {
        e.time = std::max(e.time, it->second);
    }
    e.kind = kind;
    e.subject = to;
    e.token = from;
    e.payload = payload;
    last_delivery_[key] = e.time;
    queue.push(e);
    return e;
}

} // namespace ridesim
