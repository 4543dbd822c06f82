#pragma once

#include "ridesim/fleet_sim.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

enum class Pollutant { CO2, CO, NOx, PMx };
inline constexpr std::size_t kPollutantCount = 4;
inline constexpr std::array<Pollutant, kPollutantCount> kPollutants{Pollutant::CO2, Pollutant::CO, Pollutant::NOx,
                                                                    Pollutant::PMx};

std::string_view pollutant_name(Pollutant p);
std::optional<Pollutant> parse_pollutant(std::string_view text);

/// Mean-speed bin (low, high] in km/h with its factor in grams per km.
struct SpeedBin {
    double low_kmh = 0.0;
    double high_kmh = 0.0;
    double g_per_km = 0.0;
};

struct EmissionFactorTable {
    std::string vehicle_class;
    std::array<std::vector<SpeedBin>, kPollutantCount> bins;

    /// Throws ConfigError unless, per pollutant, bins are sorted, contiguous,
    /// start at 0, have positive width and non-negative factors.
    void validate() const;

    /// Factor for a mean speed; speeds outside the table use the nearest bin
    /// and set *clamped.
    [[nodiscard]] double factor(Pollutant p, double speed_kmh, bool* clamped = nullptr) const;

    [[nodiscard]] double min_factor(Pollutant p) const;
    [[nodiscard]] double max_factor(Pollutant p) const;
};

/// Plug-in hybrid, Euro 6d petrol. 103 g/km CO2 in the 20-30 km/h bin; CO,
/// NOx and PMx follow the CO2 speed shape and sit at 0.4015 g/km, 1.7346 mg/km
/// and 5.5005 mg/km in that bin.
EmissionFactorTable default_factor_table();

/// CSV `pollutant,bin_low_kmh,bin_high_kmh,grams_per_km`; '#' lines are comments,
/// a `# class: <label>` comment names the vehicle class.
EmissionFactorTable parse_factor_table(std::istream& in);
EmissionFactorTable load_factor_table(const std::string& path);
void write_factor_table(std::ostream& out, const EmissionFactorTable& table);

struct Emissions {
    std::array<double, kPollutantCount> grams{};

    [[nodiscard]] double operator[](Pollutant p) const { return grams[static_cast<std::size_t>(p)]; }
    Emissions& operator+=(const Emissions& o);
};

enum class EmissionMode { TripMeanSpeed, PerEdge };

/// Trip mean speed (distance / duration) selects the bin; grams = factor x km.
/// Out-of-table speeds increment *clamped_count.
Emissions compute_trip_emissions(const TripLog& trip, const EmissionFactorTable& table,
                                 std::size_t* clamped_count = nullptr);

/// Bins each driven edge by its profile-adjusted speed instead. Needs the route.
Emissions compute_trip_emissions_per_edge(const TripLog& trip, const RoadGraph& graph,
                                          const EmissionFactorTable& table, std::size_t* clamped_count = nullptr);

struct EmissionTotals {
    Emissions totals;
    double distance_km = 0.0;
    std::size_t clamped = 0;

    /// Distance-weighted mean factor, g/km (0 for zero distance).
    [[nodiscard]] double mean_g_per_km(Pollutant p) const;
};

EmissionTotals aggregate_emissions(std::span<const TripLog> trips, const EmissionFactorTable& table,
                                   EmissionMode mode = EmissionMode::TripMeanSpeed, const RoadGraph* graph = nullptr);

} // namespace ridesim
