#include "ridesim/kpi.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace ridesim {

RunKpis summarize_run(const SimOutput& output, const EmissionFactorTable& table, EmissionMode mode,
                      const RoadGraph* graph)
{
    RunKpis k;
    for (const auto& t : output.trips) {
        switch (t.reason) {
        case TripReason::Pickup: k.pickup_mm += t.distance_mm; break;
        case TripReason::Ride: k.ride_mm += t.distance_mm; break;
        case TripReason::Rebalancing: k.rebalancing_mm += t.distance_mm; break;
        }
    }
    const EmissionTotals e = aggregate_emissions(output.trips, table, mode, graph);
    k.emissions = e.totals;
    k.clamped_trips = e.clamped;
    for (const auto& s : output.shifts) {
        if (s.end_ms > s.start_ms) {
            ++k.shifts;
            k.shift_duration_ms += s.duration_ms();
        }
    }
    k.orders = output.orders.size();
    k.served = static_cast<std::size_t>(std::count_if(output.orders.begin(), output.orders.end(),
                                                      [](const OrderOutcome& o) { return o.status == OrderStatus::Served; }));
    return k;
}

std::string_view kpi_metric_name(KpiMetric m)
{
    switch (m) {
    case KpiMetric::TotalMileage: return "total_mileage";
    case KpiMetric::RebalancingMileage: return "rebalancing_mileage";
    case KpiMetric::PickupMileage: return "pickup_mileage";
    case KpiMetric::RideMileage: return "ride_mileage";
    case KpiMetric::TotalCo2: return "total_co2";
    case KpiMetric::Co2Rate: return "co2_rate";
    case KpiMetric::TotalCo: return "total_co";
    case KpiMetric::TotalNox: return "total_nox";
    case KpiMetric::TotalPmx: return "total_pmx";
    case KpiMetric::MileagePerShift: return "mileage_per_shift";
    case KpiMetric::ShiftDuration: return "shift_duration";
    case KpiMetric::Shifts: return "shifts";
    case KpiMetric::OrdersServed: return "orders_served";
    }
    return "?";
}

std::string_view kpi_metric_unit(KpiMetric m)
{
    switch (m) {
    case KpiMetric::TotalMileage:
    case KpiMetric::RebalancingMileage:
    case KpiMetric::PickupMileage:
    case KpiMetric::RideMileage:
    case KpiMetric::MileagePerShift: return "km";
    case KpiMetric::TotalCo2: return "kg";
    case KpiMetric::Co2Rate: return "g/km";
    case KpiMetric::TotalCo:
    case KpiMetric::TotalNox:
    case KpiMetric::TotalPmx: return "g";
    case KpiMetric::ShiftDuration: return "h";
    case KpiMetric::Shifts:
    case KpiMetric::OrdersServed: return "count";
    }
    return "";
}

const KpiCell* KpiTable::find(std::string_view day, Strategy s) const
{
    for (const auto& c : cells) {
        if (c.day == day && c.strategy == s) {
            return &c;
        }
    }
    return nullptr;
}

namespace {

int day_rank(const std::string& day)
{
    const auto w = parse_weekday(day);
    return w ? static_cast<int>(*w) : 7;
}

} // namespace

KpiTable build_kpi_table(std::span<const TaggedRun> runs, Strategy baseline)
{
    std::vector<TaggedRun> sorted(runs.begin(), runs.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const TaggedRun& a, const TaggedRun& b) {
        return std::tie(a.day, a.strategy, a.seed) < std::tie(b.day, b.strategy, b.seed);
    });

    KpiTable t;
    t.baseline = baseline;
    std::set<std::string> days;
    std::set<Strategy> strategies;
    for (const auto& r : sorted) {
        days.insert(r.day);
        strategies.insert(r.strategy);
    }
    t.days.assign(days.begin(), days.end());
    std::stable_sort(t.days.begin(), t.days.end(),
                     [](const std::string& a, const std::string& b) { return day_rank(a) < day_rank(b); });
    t.strategies.push_back(baseline);
    for (auto s : strategies) {
        if (s != baseline) {
            t.strategies.push_back(s);
        }
    }

    for (const auto& day : t.days) {
        if (!strategies.contains(baseline) ||
            std::none_of(sorted.begin(), sorted.end(),
                         [&](const TaggedRun& r) { return r.day == day && r.strategy == baseline; })) {
            throw DataError("KPI table: no " + std::string(strategy_name(baseline)) + " baseline run for day " + day);
        }
        for (auto s : t.strategies) {
            KpiCell c;
            c.day = day;
            c.strategy = s;
            Emissions em;
            std::int64_t dur = 0;
            std::size_t shifts = 0;
            std::size_t served = 0;
            for (const auto& r : sorted) {
                if (r.day != day || r.strategy != s) {
                    continue;
                }
                ++c.variations;
                c.pickup_mm += r.kpis.pickup_mm;
                c.ride_mm += r.kpis.ride_mm;
                c.rebalancing_mm += r.kpis.rebalancing_mm;
                em += r.kpis.emissions;
                dur += r.kpis.shift_duration_ms;
                shifts += r.kpis.shifts;
                served += r.kpis.served;
            }
            if (c.variations == 0) {
                continue;
            }
            const double n = static_cast<double>(c.variations);
            const auto km = [&](std::int64_t mm) { return static_cast<double>(mm) / 1e6 / n; };
            const auto set = [&](KpiMetric m, double v) { c.mean[static_cast<std::size_t>(m)] = v; };
            set(KpiMetric::TotalMileage, km(c.total_mm()));
            set(KpiMetric::RebalancingMileage, km(c.rebalancing_mm));
            set(KpiMetric::PickupMileage, km(c.pickup_mm));
            set(KpiMetric::RideMileage, km(c.ride_mm));
            set(KpiMetric::TotalCo2, em[Pollutant::CO2] / 1000.0 / n);
            set(KpiMetric::Co2Rate, c.total_mm() > 0 ? em[Pollutant::CO2] / (static_cast<double>(c.total_mm()) / 1e6) : 0.0);
            set(KpiMetric::TotalCo, em[Pollutant::CO] / n);
            set(KpiMetric::TotalNox, em[Pollutant::NOx] / n);
            set(KpiMetric::TotalPmx, em[Pollutant::PMx] / n);
            set(KpiMetric::MileagePerShift, shifts > 0 ? static_cast<double>(c.total_mm()) / 1e6 / static_cast<double>(shifts) : 0.0);
            set(KpiMetric::ShiftDuration, shifts > 0 ? static_cast<double>(dur) / 3.6e6 / static_cast<double>(shifts) : 0.0);
            set(KpiMetric::Shifts, static_cast<double>(shifts) / n);
            set(KpiMetric::OrdersServed, static_cast<double>(served) / n);
            t.cells.push_back(std::move(c));
        }
    }
    for (auto& c : t.cells) {
        const KpiCell* base = t.find(c.day, baseline);
        for (std::size_t m = 0; m < kKpiMetricCount; ++m) {
            const double b = base->mean[m];
            if (b != 0.0) {
                c.delta[m] = (c.mean[m] - b) / b;
            } else if (c.mean[m] == 0.0) {
                c.delta[m] = 0.0;
            }
        }
    }
    return t;
}

std::string format_delta(std::optional<double> delta)
{
    if (!delta) {
        return "n/a";
    }
    const long pct = std::lround(*delta * 100.0);
    if (pct == 0) {
        return "0%";
    }
    return (pct > 0 ? "+" : "") + std::to_string(pct) + "%";
}

namespace {

int metric_decimals(KpiMetric m)
{
    switch (m) {
    case KpiMetric::Co2Rate: return 2;
    case KpiMetric::TotalNox:
    case KpiMetric::TotalPmx: return 2;
    case KpiMetric::Shifts:
    case KpiMetric::OrdersServed: return 1;
    default: return 3;
    }
}

std::string hours_hms(double h)
{
    const long s = std::lround(h * 3600.0);
    std::ostringstream o;
    o << s / 3600 << ':' << std::setw(2) << std::setfill('0') << (s / 60) % 60 << ':' << std::setw(2)
      << std::setfill('0') << s % 60;
    return o.str();
}

} // namespace

void write_kpi_csv(std::ostream& out, const KpiTable& table)
{
    out << "metric,unit";
    for (const auto& day : table.days) {
        for (auto s : table.strategies) {
            if (table.find(day, s)) {
                out << ',' << day << '/' << strategy_name(s) << ',' << day << '/' << strategy_name(s) << "_delta";
            }
        }
    }
    out << '\n';
    for (std::size_t m = 0; m < kKpiMetricCount; ++m) {
        const auto metric = static_cast<KpiMetric>(m);
        out << kpi_metric_name(metric) << ',' << kpi_metric_unit(metric);
        for (const auto& day : table.days) {
            for (auto s : table.strategies) {
                if (const KpiCell* c = table.find(day, s)) {
                    out << ',' << format_fixed(c->mean[m], 6) << ',' << format_delta(c->delta[m]);
                }
            }
        }
        out << '\n';
    }
    out << "variations,count";
    for (const auto& day : table.days) {
        for (auto s : table.strategies) {
            if (const KpiCell* c = table.find(day, s)) {
                out << ',' << c->variations << ',';
            }
        }
    }
    out << '\n';
}

void write_kpi_text(std::ostream& out, const KpiTable& table)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{"", ""};
    for (const auto& day : table.days) {
        for (auto s : table.strategies) {
            if (table.find(day, s)) {
                head.push_back(day + " " + std::string(strategy_name(s)));
            }
        }
    }
    rows.push_back(head);
    for (std::size_t m = 0; m < kKpiMetricCount; ++m) {
        const auto metric = static_cast<KpiMetric>(m);
        std::vector<std::string> row{std::string(kpi_metric_name(metric)), "[" + std::string(kpi_metric_unit(metric)) + "]"};
        for (const auto& day : table.days) {
            for (auto s : table.strategies) {
                if (const KpiCell* c = table.find(day, s)) {
                    std::string v = metric == KpiMetric::ShiftDuration ? hours_hms(c->mean[m])
                                                                       : format_fixed(c->mean[m], metric_decimals(metric));
                    if (s != table.baseline) {
                        v += " (" + format_delta(c->delta[m]) + ")";
                    }
                    row.push_back(v);
                }
            }
        }
        rows.push_back(row);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            width[i] = std::max(width[i], r[i].size());
        }
    }
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < 2) {
                out << std::left << std::setw(static_cast<int>(width[i])) << r[i];
            } else {
                out << std::right << std::setw(static_cast<int>(width[i])) << r[i];
            }
            out << (i + 1 < r.size() ? "  " : "");
        }
        out << '\n';
    }
    out << std::left;
}

} // namespace ridesim
