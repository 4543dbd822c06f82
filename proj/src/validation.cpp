#include "ridesim/validation.hpp"

#include "ridesim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace ridesim {

double median(std::vector<double> values)
{
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double share_abs_below(std::span<const double> values, double threshold)
{
    if (values.empty()) {
        return 0.0;
    }
    const auto k = std::count_if(values.begin(), values.end(), [&](double v) { return std::abs(v) < threshold; });
    return static_cast<double>(k) / static_cast<double>(values.size());
}

ValidationReport report_from_diffs(std::vector<double> travel_time_diff_s, std::vector<double> pickup_diff_s,
                                   double threshold_s)
{
    ValidationReport r;
    r.threshold_s = threshold_s;
    r.travel_time_diff_s = std::move(travel_time_diff_s);
    r.pickup_diff_s = std::move(pickup_diff_s);
    r.travel_time_median_s = median(r.travel_time_diff_s);
    r.pickup_median_s = median(r.pickup_diff_s);
    r.travel_time_share_below = share_abs_below(r.travel_time_diff_s, threshold_s);
    r.pickup_share_below = share_abs_below(r.pickup_diff_s, threshold_s);
    return r;
}

ValidationReport validation_metrics(const SimOutput& output, std::span<const RideOrder> reference,
                                    double threshold_s)
{
    std::unordered_map<std::string, const OrderOutcome*> served;
    for (const auto& o : output.orders) {
        if (o.status == OrderStatus::Served) {
            served.emplace(o.order_id, &o);
        }
    }
    std::vector<double> travel;
    std::vector<double> pickup;
    std::vector<std::string> matched;
    std::vector<std::string> unmatched;
    std::unordered_set<std::string> seen;
    for (const auto& ref : reference) {
        const auto it = served.find(ref.order_id);
        if (it == served.end()) {
            unmatched.push_back(ref.order_id);
            continue;
        }
        seen.insert(ref.order_id);
        const OrderOutcome& o = *it->second;
        const double sim_travel = static_cast<double>(o.dropoff_ms - o.pickup_ms) / 1000.0;
        const double ref_travel = static_cast<double>(ref.dropoff_time.unix_s - ref.pickup_time.unix_s);
        travel.push_back(sim_travel - ref_travel);
        pickup.push_back(static_cast<double>(o.pickup_ms - ref.pickup_time.as_sim_time()) / 1000.0);
        matched.push_back(ref.order_id);
    }
    for (const auto& o : output.orders) {
        if (o.status == OrderStatus::Served && !seen.contains(o.order_id)) {
            unmatched.push_back(o.order_id);
        }
    }
    ValidationReport r = report_from_diffs(std::move(travel), std::move(pickup), threshold_s);
    r.matched_ids = std::move(matched);
    r.unmatched = std::move(unmatched);
    return r;
}

void write_validation_histogram(std::ostream& out, const ValidationReport& report, double bin_s)
{
    std::map<long, std::pair<std::size_t, std::size_t>> bins;
    for (double v : report.travel_time_diff_s) {
        ++bins[static_cast<long>(std::floor(v / bin_s))].first;
    }
    for (double v : report.pickup_diff_s) {
        ++bins[static_cast<long>(std::floor(v / bin_s))].second;
    }
    out << "bin_low_s,bin_high_s,travel_time_count,pickup_count\n";
    if (bins.empty()) {
        return;
    }
    for (long k = bins.begin()->first; k <= bins.rbegin()->first; ++k) {
        const auto it = bins.find(k);
        const auto counts = it == bins.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
        out << format_fixed(static_cast<double>(k) * bin_s, 1) << ',' << format_fixed(static_cast<double>(k + 1) * bin_s, 1)
            << ',' << counts.first << ',' << counts.second << '\n';
    }
}

void write_validation_summary(std::ostream& out, const ValidationReport& report)
{
    out << "metric,value\n";
    out << "matched_orders," << report.travel_time_diff_s.size() << '\n';
    out << "unmatched_orders," << report.unmatched.size() << '\n';
    out << "threshold_s," << format_fixed(report.threshold_s, 1) << '\n';
    out << "travel_time_median_s," << format_fixed(report.travel_time_median_s, 3) << '\n';
    out << "travel_time_share_below," << format_fixed(report.travel_time_share_below, 6) << '\n';
    out << "pickup_median_s," << format_fixed(report.pickup_median_s, 3) << '\n';
    out << "pickup_share_below," << format_fixed(report.pickup_share_below, 6) << '\n';
}

} // namespace ridesim
