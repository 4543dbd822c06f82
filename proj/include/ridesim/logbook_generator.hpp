#pragma once

#include "ridesim/logbook.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

struct VehicleSchedule {
    std::string vehicle_id;
    std::vector<Shift> shifts; // time-ordered
};

/// One simulated day assembled from historical shifts.
struct SyntheticLogbook {
    Weekday day = Weekday::Wednesday;
    std::size_t fleet_size = 0;
    std::uint64_t seed = 0;
    std::vector<VehicleSchedule> vehicles;
    std::vector<std::string> warnings;

    /// All rides, grouped by vehicle then shift, in time order.
    [[nodiscard]] std::vector<RideOrder> orders() const;
    [[nodiscard]] std::size_t shift_count() const;
};

inline constexpr std::size_t kMaxShiftsPerVehicle = 3;

/// Reference calendar week the generated shifts are moved onto: Monday 2024-01-01.
std::int64_t reference_day_number(Weekday day);

/// Draws rides of `day` uniformly from the rides not yet used, takes the whole
/// shift containing the drawn ride (each source shift is used at most once)
/// and moves it by whole days so the drawn ride falls on the reference date.
/// The shift goes to the current vehicle if that vehicle has fewer than three
/// shifts and the pause to both neighbouring shifts is at least `min_gap`,
/// otherwise to the next vehicle. Generation stops when a shift would need
/// vehicle fleet_size + 1, or when the source runs dry (partial result with a
/// warning). Vehicles are renamed V01, V02, ...; shift ids become
/// "<vehicle>#<n>".
///
/// Throws DataError if the source holds no ride on `day` or fleet_size is 0.
SyntheticLogbook generate_logbook(std::span<const Shift> source, Weekday day, std::size_t fleet_size,
                                  std::uint64_t seed, std::chrono::seconds min_gap = kDefaultMaxShiftGap);

/// Rebuilds the per-vehicle structure of a logbook file (shift_id column when
/// present, otherwise gap-based extraction).
SyntheticLogbook logbook_from_orders(std::span<const RideOrder> orders);

} // namespace ridesim
