#include "ridesim/extrapolation.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"

#include "json.hpp"

#include <cmath>
#include <ostream>

namespace ridesim {

void ExtrapolationInputs::validate() const
{
    if (!(completion_factor >= 0.0) || !(co2_g_per_km >= 0.0) || !(year_days > 0.0)) {
        throw ConfigError("extrapolation: completion factor and CO2 rate must be >= 0, year_days > 0");
    }
    for (const auto& d : days) {
        if (!(d.utilization >= 0.0 && d.utilization <= 1.0)) {
            throw ConfigError("extrapolation: utilization outside [0, 1] on " + format_date(d.day_number));
        }
        if (!(d.fleet_size >= 0.0) || !(d.pickup_km >= 0.0) || !(d.ride_km >= 0.0) || !(d.rebalancing_km >= 0.0)) {
            throw ConfigError("extrapolation: negative value on " + format_date(d.day_number));
        }
    }
}

namespace {

void fill_derived(ExtrapolationTable& t)
{
    if (t.rows.empty()) {
        return;
    }
    for (auto& r : t.rows) {
        r.s_total = r.s_pickup + r.s_ride + r.s_rebalancing;
        r.s_daily = r.s_total / t.year_days;
        r.e_kg = r.s_total * t.co2_g_per_km / 1000.0;
    }
    const ExtrapolationRow base = t.rows.front();
    for (auto& r : t.rows) {
        r.delta_s = base.s_total - r.s_total;
        r.delta_s_daily = r.delta_s / t.year_days;
        r.delta_e_kg = r.delta_s * t.co2_g_per_km / 1000.0;
    }
}

bool is_weekend_group(std::int64_t day_number)
{
    return weekday_of_day_number(day_number) >= Weekday::Friday;
}

} // namespace

ExtrapolationTable extrapolate_annual(const ExtrapolationInputs& inputs, std::span<const StrategyAdjustment> strategies)
{
    inputs.validate();
    ExtrapolationTable t;
    t.co2_g_per_km = inputs.co2_g_per_km;
    t.year_days = inputs.year_days;
    for (const auto& s : strategies) {
        ExtrapolationRow r;
        r.name = s.name;
        for (const auto& d : inputs.days) {
            const ReasonChanges& c = is_weekend_group(d.day_number) ? s.weekend : s.weekday;
            const double active = d.utilization * d.fleet_size;
            const double p = d.pickup_km * (1.0 + c.pickup);
            const double q = d.ride_km * (1.0 + c.ride);
            const double b = d.rebalancing_km * (1.0 + c.rebalancing);
            if (p < 0.0 || q < 0.0 || b < 0.0) {
                throw ConfigError("extrapolation: adjustment of " + s.name + " makes mileage negative");
            }
            r.s_pickup += active * p;
            r.s_ride += active * q;
            r.s_rebalancing += active * b;
        }
        r.s_pickup *= inputs.completion_factor;
        r.s_ride *= inputs.completion_factor;
        r.s_rebalancing *= inputs.completion_factor;
        t.rows.push_back(r);
    }
    fill_derived(t);
    return t;
}

ExtrapolationTable extrapolation_from_totals(std::span<const StrategyTotals> totals, double co2_g_per_km,
                                             double year_days)
{
    ExtrapolationTable t;
    t.co2_g_per_km = co2_g_per_km;
    t.year_days = year_days;
    for (const auto& s : totals) {
        ExtrapolationRow r;
        r.name = s.name;
        r.s_pickup = s.s_pickup;
        r.s_ride = s.s_ride;
        r.s_rebalancing = s.s_rebalancing;
        t.rows.push_back(r);
    }
    fill_derived(t);
    return t;
}

StrategyAdjustment adjustment_from_kpis(const KpiTable& table, Strategy strategy, std::string_view weekday_day,
                                        std::string_view weekend_day)
{
    const auto changes = [&](std::string_view day) {
        const KpiCell* c = table.find(day, strategy);
        if (!c) {
            throw DataError("KPI table has no " + std::string(day) + "/" + std::string(strategy_name(strategy)) +
                            " cell");
        }
        const auto d = [&](KpiMetric m) { return c->delta[static_cast<std::size_t>(m)].value_or(0.0); };
        return ReasonChanges{d(KpiMetric::PickupMileage), d(KpiMetric::RideMileage), d(KpiMetric::RebalancingMileage)};
    };
    return {std::string(strategy_name(strategy)), changes(weekday_day), changes(weekend_day)};
}

ExtrapolationTable run_extrapolation_json(const std::string& json_text)
{
    using nlohmann::json;
    try {
        const json j = json::parse(json_text);
        const double rate = j.value("co2_g_per_km", 102.35);
        const double year_days = j.value("year_days", 365.0);
        if (j.contains("totals")) {
            std::vector<StrategyTotals> totals;
            for (const auto& s : j.at("totals")) {
                totals.push_back({s.at("name").get<std::string>(), s.at("S_p").get<double>(), s.at("S_r").get<double>(),
                                  s.at("S_b").get<double>()});
            }
            return extrapolation_from_totals(totals, rate, year_days);
        }
        ExtrapolationInputs in;
        in.co2_g_per_km = rate;
        in.year_days = year_days;
        in.completion_factor = j.value("completion_factor", 1.17);
        for (const auto& d : j.at("days")) {
            const auto day = parse_date(d.at("date").get<std::string>());
            if (!day) {
                throw ConfigError("extrapolation: bad date " + d.at("date").dump());
            }
            in.days.push_back({*day, d.at("fleet_size").get<double>(), d.at("utilization").get<double>(),
                               d.at("pickup_km").get<double>(), d.at("ride_km").get<double>(),
                               d.at("rebalancing_km").get<double>()});
        }
        const auto changes = [](const json& c) {
            return ReasonChanges{c.value("pickup", 0.0), c.value("ride", 0.0), c.value("rebalancing", 0.0)};
        };
        std::vector<StrategyAdjustment> strategies;
        for (const auto& s : j.at("strategies")) {
            strategies.push_back({s.at("name").get<std::string>(), changes(s.value("weekday", json::object())),
                                  changes(s.value("weekend", json::object()))});
        }
        return extrapolate_annual(in, strategies);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("extrapolation input: ") + e.what());
    }
}

void write_extrapolation_csv(std::ostream& out, const ExtrapolationTable& table)
{
    out << "quantity,unit";
    for (const auto& r : table.rows) {
        out << ',' << r.name;
    }
    out << '\n';
    const auto line = [&](const char* q, const char* unit, double ExtrapolationRow::*field) {
        out << q << ',' << unit;
        for (const auto& r : table.rows) {
            out << ',' << format_fixed(std::round(r.*field), 0);
        }
        out << '\n';
    };
    line("S_p", "km", &ExtrapolationRow::s_pickup);
    line("S_r", "km", &ExtrapolationRow::s_ride);
    line("S_b", "km", &ExtrapolationRow::s_rebalancing);
    line("S", "km", &ExtrapolationRow::s_total);
    line("dS", "km", &ExtrapolationRow::delta_s);
    line("S_mean", "km", &ExtrapolationRow::s_daily);
    line("dS_mean", "km", &ExtrapolationRow::delta_s_daily);
    line("E_CO2", "kg", &ExtrapolationRow::e_kg);
    line("dE_CO2", "kg", &ExtrapolationRow::delta_e_kg);
}

} // namespace ridesim
