#include "ridesim/error.hpp"
#include "ridesim/logbook.hpp"

#include <algorithm>
#include <map>

namespace ridesim {

std::vector<Shift> extract_shifts(std::span<const RideOrder> orders, std::chrono::seconds max_gap)
{
    std::map<std::string, std::vector<RideOrder>> by_vehicle;
    for (const auto& o : orders) {
        by_vehicle[o.vehicle_id].push_back(o);
    }

    std::vector<Shift> shifts;
    for (auto& [vehicle, rides] : by_vehicle) {
        std::stable_sort(rides.begin(), rides.end(),
                         [](const RideOrder& a, const RideOrder& b) { return a.order_time < b.order_time; });
        int n = 0;
        for (std::size_t i = 0; i < rides.size(); ++i) {
            const bool split =
                i == 0 || rides[i].order_time.unix_s - rides[i - 1].dropoff_time.unix_s > max_gap.count();
            if (split) {
                shifts.push_back({vehicle + "#" + std::to_string(++n), vehicle, {}});
            }
            shifts.back().rides.push_back(std::move(rides[i]));
        }
    }
    return shifts;
}

std::string_view follow_up_name(FollowUp f)
{
    switch (f) {
    case FollowUp::DuringRide: return "during_ride";
    case FollowUp::DuringReturn: return "during_return";
    case FollowUp::AtPoB: return "at_pob";
    case FollowUp::None: return "none";
    }
    return "?";
}

std::vector<FollowUp> classify_follow_up(const Shift& shift,
                                         std::span<const std::optional<Timestamp>> return_arrivals)
{
    const auto& rides = shift.rides;
    std::vector<FollowUp> out(rides.size(), FollowUp::None);
    for (std::size_t i = 0; i + 1 < rides.size(); ++i) {
        const Timestamp next = rides[i + 1].order_time;
        if (next <= rides[i].dropoff_time) {
            out[i] = FollowUp::DuringRide;
            continue;
        }
        if (i >= return_arrivals.size() || !return_arrivals[i]) {
            throw DataError("shift " + shift.id + ": return arrival missing for ride " + rides[i].order_id);
        }
        out[i] = next <= *return_arrivals[i] ? FollowUp::DuringReturn : FollowUp::AtPoB;
    }
    return out;
}

} // namespace ridesim
