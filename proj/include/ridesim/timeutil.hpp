#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace ridesim {

/// Simulation clock: integer milliseconds since the Unix epoch (UTC).
using SimTime = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Logbook timestamp at one second resolution. Ordering and equality compare the
/// instant only; the UTC offset is carried for local-time questions and output.
struct Timestamp {
    std::int64_t unix_s = 0;
    std::int32_t utc_offset_s = 0;

    friend bool operator==(const Timestamp& a, const Timestamp& b) { return a.unix_s == b.unix_s; }
    friend std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b)
    {
        return a.unix_s <=> b.unix_s;
    }

    [[nodiscard]] Timestamp plus_seconds(std::int64_t s) const { return {unix_s + s, utc_offset_s}; }
    [[nodiscard]] SimTime as_sim_time() const { return unix_s * 1000; }
};

enum class Weekday : int { Monday = 0, Tuesday, Wednesday, Thursday, Friday, Saturday, Sunday };

/// Parses ISO 8601 `YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM|+HHMM)`.
/// A zone designator is required. Fractional seconds are truncated.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SS+HH:MM` in the timestamp's own offset.
std::string format_timestamp(Timestamp ts);

/// Days since 1970-01-01 of the timestamp's local calendar date.
std::int64_t local_day_number(Timestamp ts);

/// Seconds since local midnight.
std::int64_t local_seconds_of_day(Timestamp ts);

Weekday local_weekday(Timestamp ts);
Weekday weekday_of_day_number(std::int64_t day_number);

std::optional<Weekday> parse_weekday(std::string_view name);
std::string_view weekday_name(Weekday day);

/// Days since epoch for a proleptic Gregorian date.
std::int64_t day_number_from_civil(int year, unsigned month, unsigned day);

/// ISO date `YYYY-MM-DD` of a day number.
std::string format_date(std::int64_t day_number);
std::optional<std::int64_t> parse_date(std::string_view text);

/// Seconds since local midnight for a simulation instant at the given UTC offset.
double seconds_of_day(SimTime t, std::int32_t utc_offset_s);

} // namespace ridesim
