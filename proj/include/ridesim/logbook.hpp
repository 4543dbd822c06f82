#pragma once

#include "ridesim/geo.hpp"
#include "ridesim/timeutil.hpp"

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

/// One customer booking as recorded in an operator logbook.
struct RideOrder {
    std::string order_id;
    Timestamp order_time;
    std::string vehicle_id;
    LatLon accept_location; // vehicle position when the order was accepted
    Timestamp pickup_time;
    LatLon pickup_location;
    Timestamp dropoff_time;
    LatLon dropoff_location;
    std::string shift_id; // optional; set by the logbook generator
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct LogbookParseResult {
    std::vector<RideOrder> orders; // valid rows, file order
    std::vector<RejectedRow> rejected;
};

/// Reads the logbook CSV. Required columns: order_time, vehicle_id, accept_lat,
/// accept_lon, pickup_time, pickup_lat, pickup_lon, dropoff_time, dropoff_lat,
/// dropoff_lon. Optional: order_id (defaults to "L<line>"), shift_id.
///
/// Rows violating order_time <= pickup_time <= dropoff_time or carrying
/// non-finite coordinates are rejected and reported by line. A missing column
/// or an unparseable timestamp or number throws LogbookError.
LogbookParseResult parse_logbook(std::istream& in);
LogbookParseResult parse_logbook(const std::string& path);

/// Writes the same CSV layout (including order_id and shift_id columns).
void write_logbook(std::ostream& out, std::span<const RideOrder> orders);
void write_logbook(const std::string& path, std::span<const RideOrder> orders);

inline constexpr std::chrono::seconds kDefaultMaxShiftGap{2 * 3600};

/// A vehicle's run of rides with no pause longer than the gap limit.
struct Shift {
    std::string id;
    std::string vehicle_id;
    std::vector<RideOrder> rides; // ordered by order_time, never empty

    [[nodiscard]] Timestamp start() const { return rides.front().order_time; }
    [[nodiscard]] Timestamp end() const { return rides.back().dropoff_time; }
};

/// Groups rides per vehicle (stable-sorted by order_time) and splits wherever
/// order_time(next) - dropoff_time(prev) > max_gap. A gap of exactly max_gap
/// stays in one shift. Shifts come out grouped by vehicle id (sorted), then in
/// time order; ids are "<vehicle>#<n>".
std::vector<Shift> extract_shifts(std::span<const RideOrder> orders,
                                  std::chrono::seconds max_gap = kDefaultMaxShiftGap);

/// Simple closed polygon over (lat, lon); closing vertex optional.
class Polygon {
public:
    /// Throws DataError for fewer than three distinct vertices.
    explicit Polygon(std::vector<LatLon> ring);

    /// Even-odd ray casting in the lon/lat plane.
    [[nodiscard]] bool contains(LatLon p) const;
    [[nodiscard]] const std::vector<LatLon>& ring() const { return ring_; }

private:
    std::vector<LatLon> ring_;
};

/// GeoJSON Polygon, Feature or FeatureCollection (first polygon, outer ring);
/// coordinates are [lon, lat].
Polygon parse_polygon(const std::string& json_text);
Polygon load_polygon(const std::string& path);

struct AreaFilterResult {
    std::vector<Shift> kept;
    std::vector<Shift> dismissed;
};

/// A shift is dismissed as a whole if any pickup or dropoff lies outside.
AreaFilterResult filter_out_of_area(std::span<const Shift> shifts, const Polygon& boundary);

enum class FollowUp { DuringRide, DuringReturn, AtPoB, None };

std::string_view follow_up_name(FollowUp f);

/// When the follow-up of each ride was accepted. `return_arrivals[i]` is the
/// time ride i's vehicle would reach the PoB; it is only consulted (and then
/// required) when order_time(i+1) > dropoff_time(i). Throws DataError when a
/// needed entry is missing.
std::vector<FollowUp> classify_follow_up(const Shift& shift,
                                         std::span<const std::optional<Timestamp>> return_arrivals);

} // namespace ridesim
