#pragma once

#include "ridesim/kpi.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

/// Mileage per active vehicle on one calendar day, km.
struct ExtrapolationDay {
    std::int64_t day_number = 0;
    double fleet_size = 0.0;  // deployed vehicles n_d
    double utilization = 0.0; // rho_d in [0, 1]
    double pickup_km = 0.0;
    double ride_km = 0.0;
    double rebalancing_km = 0.0;
};

struct ExtrapolationInputs {
    std::vector<ExtrapolationDay> days;
    double completion_factor = 1.17; // C_y
    double co2_g_per_km = 102.35;
    double year_days = 365.0;

    /// Throws ConfigError for utilization outside [0, 1] or negative values.
    void validate() const;
};

/// Relative change per mileage reason, e.g. pickup +0.14, rebalancing -1.0.
struct ReasonChanges {
    double pickup = 0.0;
    double ride = 0.0;
    double rebalancing = 0.0;
};

/// Monday-Thursday days take `weekday`, Friday-Sunday days take `weekend`.
struct StrategyAdjustment {
    std::string name;
    ReasonChanges weekday;
    ReasonChanges weekend;
};

struct ExtrapolationRow {
    std::string name;
    double s_pickup = 0.0;
    double s_ride = 0.0;
    double s_rebalancing = 0.0;
    double s_total = 0.0;
    double delta_s = 0.0;      // baseline minus this strategy: positive = saved
    double s_daily = 0.0;      // S / year_days
    double delta_s_daily = 0.0;
    double e_kg = 0.0;
    double delta_e_kg = 0.0;
};

struct ExtrapolationTable {
    std::vector<ExtrapolationRow> rows; // first row is the baseline
    double co2_g_per_km = 0.0;
    double year_days = 365.0;
};

/// S_i = C_y * sum_d rho_d * n_d * s_i(d) per reason, with each strategy's
/// changes applied to s_i(d). The first strategy is the baseline.
ExtrapolationTable extrapolate_annual(const ExtrapolationInputs& inputs, std::span<const StrategyAdjustment> strategies);

struct StrategyTotals {
    std::string name;
    double s_pickup = 0.0;
    double s_ride = 0.0;
    double s_rebalancing = 0.0;
};

/// Derived rows from already-extrapolated yearly mileages; the first entry is the baseline.
ExtrapolationTable extrapolation_from_totals(std::span<const StrategyTotals> totals, double co2_g_per_km,
                                             double year_days = 365.0);

/// Weekday (Wednesday) and weekend (Saturday) changes of `strategy` relative
/// to the table's baseline, read from the pickup/ride/rebalancing deltas.
StrategyAdjustment adjustment_from_kpis(const KpiTable& table, Strategy strategy, std::string_view weekday_day,
                                        std::string_view weekend_day);

/// JSON. Either {"days": [...], "strategies": [...], ...} or {"totals": [...]}.
ExtrapolationTable run_extrapolation_json(const std::string& json_text);

/// Rows S_p, S_r, S_b, S, dS, S_mean, dS_mean, E, dE; one column per strategy,
/// values rounded to whole units.
void write_extrapolation_csv(std::ostream& out, const ExtrapolationTable& table);

} // namespace ridesim
