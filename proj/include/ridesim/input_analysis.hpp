#pragma once

#include "ridesim/logbook.hpp"
#include "ridesim/travel_model.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

/// dropoff_time + empty-network driving time from dropoff to the PoB, per ride.
/// std::nullopt where that leg cannot be routed.
std::vector<std::optional<Timestamp>> estimate_return_arrivals(const Shift& shift, const TravelModel& model,
                                                               LatLon pob);

struct FollowUpCounts {
    std::array<std::size_t, 3> count{}; // DuringRide, DuringReturn, AtPoB
    std::size_t unclassified = 0;        // return leg unroutable

    [[nodiscard]] std::size_t total() const { return count[0] + count[1] + count[2]; }
    [[nodiscard]] double share(FollowUp f) const;
    FollowUpCounts& operator+=(const FollowUpCounts& o);
};

/// Follow-up categories over all shifts, grouped by the local weekday of each
/// ride's order_time. The last ride of a shift carries no follow-up and is
/// not counted.
struct FollowUpStats {
    std::array<FollowUpCounts, 7> by_weekday{};
    [[nodiscard]] FollowUpCounts overall() const;
};

FollowUpStats follow_up_statistics(std::span<const Shift> shifts, const TravelModel& model, LatLon pob);

struct MileageTotals {
    double pickup_m = 0.0;
    double ride_m = 0.0;
    double return_m = 0.0;

    [[nodiscard]] double total_m() const { return pickup_m + ride_m + return_m; }
    /// {pickup, ride, return}; all zero for an empty total.
    [[nodiscard]] std::array<double, 3> shares() const;
    MileageTotals& operator+=(const MileageTotals& o);
};

struct MileageReport {
    std::map<std::int64_t, MileageTotals> by_day; // local day number of the ride's order_time
    std::array<MileageTotals, 7> by_weekday{};
    MileageTotals overall;
    std::size_t rides = 0;
    std::vector<std::string> unroutable; // order ids excluded from the totals
};

/// Mileage by reason from empty-network fastest paths:
///   pickup  accept_location -> pickup (from the previous dropoff when the
///           order was accepted during the previous ride)
///   ride    pickup -> dropoff
///   return  dropoff -> PoB; none after a DuringRide follow-up, cut at the
///           time fraction the next order arrived for DuringReturn, full for
///           AtPoB and the last ride of a shift.
MileageReport static_mileage_report(std::span<const Shift> shifts, const TravelModel& model, LatLon pob);
MileageReport static_mileage_report(std::span<const Shift> shifts, const RoadGraph& graph, LatLon pob);

/// Shares of the real fleet's daily mileage, printed as a reference line.
inline constexpr std::array<double, 3> kReferenceMileageShares{0.17, 0.52, 0.31};

void write_mileage_report(std::ostream& out, const MileageReport& report);
void write_follow_up_report(std::ostream& out, const FollowUpStats& stats);

} // namespace ridesim
