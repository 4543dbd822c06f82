#pragma once

#include "ridesim/emissions.hpp"
#include "ridesim/fleet_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

/// Per-run figures; mileages stay integer millimetres so the identity
/// total = pickup + ride + rebalancing holds exactly.
struct RunKpis {
    std::int64_t pickup_mm = 0;
    std::int64_t ride_mm = 0;
    std::int64_t rebalancing_mm = 0;
    Emissions emissions;
    std::size_t shifts = 0; // shifts with at least one trip
    std::int64_t shift_duration_ms = 0; // summed over those shifts
    std::size_t orders = 0;
    std::size_t served = 0;
    std::size_t clamped_trips = 0;

    [[nodiscard]] std::int64_t total_mm() const { return pickup_mm + ride_mm + rebalancing_mm; }
};

RunKpis summarize_run(const SimOutput& output, const EmissionFactorTable& table,
                      EmissionMode mode = EmissionMode::TripMeanSpeed, const RoadGraph* graph = nullptr);

struct TaggedRun {
    std::string day;
    Strategy strategy = Strategy::Return;
    std::uint64_t seed = 0;
    RunKpis kpis;
};

enum class KpiMetric {
    TotalMileage,
    RebalancingMileage,
    PickupMileage,
    RideMileage,
    TotalCo2,
    Co2Rate,
    TotalCo,
    TotalNox,
    TotalPmx,
    MileagePerShift,
    ShiftDuration,
    Shifts,
    OrdersServed,
};
inline constexpr std::size_t kKpiMetricCount = 13;

std::string_view kpi_metric_name(KpiMetric m);
std::string_view kpi_metric_unit(KpiMetric m);

/// Averages of one (day, strategy) over its variations.
struct KpiCell {
    std::string day;
    Strategy strategy = Strategy::Return;
    std::size_t variations = 0;
    // sums over variations, exact
    std::int64_t pickup_mm = 0;
    std::int64_t ride_mm = 0;
    std::int64_t rebalancing_mm = 0;
    std::array<double, kKpiMetricCount> mean{};
    std::array<std::optional<double>, kKpiMetricCount> delta{}; // vs baseline; empty when baseline is 0

    [[nodiscard]] std::int64_t total_mm() const { return pickup_mm + ride_mm + rebalancing_mm; }
    [[nodiscard]] double value(KpiMetric m) const { return mean[static_cast<std::size_t>(m)]; }
};

struct KpiTable {
    Strategy baseline = Strategy::Return;
    std::vector<std::string> days;       // weekday order where recognisable
    std::vector<Strategy> strategies;    // baseline first
    std::vector<KpiCell> cells;          // days x strategies, row-major

    [[nodiscard]] const KpiCell* find(std::string_view day, Strategy s) const;
};

/// Throws DataError when a day lacks the baseline strategy.
KpiTable build_kpi_table(std::span<const TaggedRun> runs, Strategy baseline = Strategy::Return);

/// Relative change rounded to whole percent with sign, e.g. "-24%", "+14%", "0%".
std::string format_delta(std::optional<double> delta);

void write_kpi_csv(std::ostream& out, const KpiTable& table);
void write_kpi_text(std::ostream& out, const KpiTable& table);

} // namespace ridesim
