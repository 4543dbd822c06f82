#include "ridesim/input_analysis.hpp"

#include "ridesim/csv.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>

namespace ridesim {

std::vector<std::optional<Timestamp>> estimate_return_arrivals(const Shift& shift, const TravelModel& model,
                                                               LatLon pob)
{
    std::vector<std::optional<Timestamp>> out;
    out.reserve(shift.rides.size());
    for (const auto& r : shift.rides) {
        const auto leg = model.leg(r.dropoff_location, pob);
        if (!leg) {
            out.emplace_back();
            continue;
        }
        out.push_back(r.dropoff_time.plus_seconds(static_cast<std::int64_t>(std::ceil(leg->time_s))));
    }
    return out;
}

double FollowUpCounts::share(FollowUp f) const
{
    const std::size_t t = total();
    if (t == 0 || f == FollowUp::None) {
        return 0.0;
    }
    return static_cast<double>(count[static_cast<std::size_t>(f)]) / static_cast<double>(t);
}

FollowUpCounts& FollowUpCounts::operator+=(const FollowUpCounts& o)
{
    for (std::size_t i = 0; i < count.size(); ++i) {
        count[i] += o.count[i];
    }
    unclassified += o.unclassified;
    return *this;
}

FollowUpCounts FollowUpStats::overall() const
{
    FollowUpCounts c;
    for (const auto& w : by_weekday) {
        c += w;
    }
    return c;
}

FollowUpStats follow_up_statistics(std::span<const Shift> shifts, const TravelModel& model, LatLon pob)
{
    FollowUpStats stats;
    for (const auto& s : shifts) {
        const auto arrivals = estimate_return_arrivals(s, model, pob);
        for (std::size_t i = 0; i + 1 < s.rides.size(); ++i) {
            auto& bucket = stats.by_weekday[static_cast<std::size_t>(local_weekday(s.rides[i].order_time))];
            const Timestamp next = s.rides[i + 1].order_time;
            if (next <= s.rides[i].dropoff_time) {
                ++bucket.count[0];
            } else if (!arrivals[i]) {
                ++bucket.unclassified;
            } else {
                ++bucket.count[next <= *arrivals[i] ? 1 : 2];
            }
        }
    }
    return stats;
}

std::array<double, 3> MileageTotals::shares() const
{
    const double t = total_m();
    if (t <= 0.0) {
        return {0.0, 0.0, 0.0};
    }
    return {pickup_m / t, ride_m / t, return_m / t};
}

MileageTotals& MileageTotals::operator+=(const MileageTotals& o)
{
    pickup_m += o.pickup_m;
    ride_m += o.ride_m;
    return_m += o.return_m;
    return *this;
}

MileageReport static_mileage_report(std::span<const Shift> shifts, const TravelModel& model, LatLon pob)
{
    MileageReport report;
    for (const auto& s : shifts) {
        for (std::size_t i = 0; i < s.rides.size(); ++i) {
            const RideOrder& r = s.rides[i];
            const bool accepted_during_prev_ride = i > 0 && r.order_time <= s.rides[i - 1].dropoff_time;
            const LatLon pickup_from = accepted_during_prev_ride ? s.rides[i - 1].dropoff_location : r.accept_location;

            const auto pickup = model.leg(pickup_from, r.pickup_location);
            const auto ride = model.leg(r.pickup_location, r.dropoff_location);
            std::optional<LegEstimate> back;
            double fraction = 1.0;
            bool need_back = true;
            if (i + 1 < s.rides.size()) {
                const Timestamp next = s.rides[i + 1].order_time;
                if (next <= r.dropoff_time) {
                    need_back = false;
                }
            }
            if (need_back) {
                back = model.leg(r.dropoff_location, pob);
                if (back && i + 1 < s.rides.size() && back->time_s > 0.0) {
                    const double waited = static_cast<double>(s.rides[i + 1].order_time.unix_s - r.dropoff_time.unix_s);
                    fraction = std::clamp(waited / back->time_s, 0.0, 1.0);
                }
            }
            if (!pickup || !ride || (need_back && !back)) {
                report.unroutable.push_back(r.order_id);
                continue;
            }
            MileageTotals m;
            m.pickup_m = pickup->length_m;
            m.ride_m = ride->length_m;
            m.return_m = need_back ? back->length_m * fraction : 0.0;
            report.by_day[local_day_number(r.order_time)] += m;
            report.by_weekday[static_cast<std::size_t>(local_weekday(r.order_time))] += m;
            report.overall += m;
            ++report.rides;
        }
    }
    return report;
}

MileageReport static_mileage_report(std::span<const Shift> shifts, const RoadGraph& graph, LatLon pob)
{
    const NetworkTravelModel model(std::make_shared<const RoadGraph>(graph));
    return static_mileage_report(shifts, model, pob);
}

namespace {

void mileage_row(std::ostream& out, const std::string& label, const MileageTotals& m)
{
    const auto sh = m.shares();
    out << label << ',' << format_fixed(m.pickup_m / 1000.0, 3) << ',' << format_fixed(m.ride_m / 1000.0, 3) << ','
        << format_fixed(m.return_m / 1000.0, 3) << ',' << format_fixed(m.total_m() / 1000.0, 3) << ','
        << format_fixed(sh[0], 4) << ',' << format_fixed(sh[1], 4) << ',' << format_fixed(sh[2], 4) << '\n';
}

} // namespace

void write_mileage_report(std::ostream& out, const MileageReport& report)
{
    out << "scope,pickup_km,ride_km,return_km,total_km,pickup_share,ride_share,return_share\n";
    for (const auto& [day, m] : report.by_day) {
        mileage_row(out, format_date(day), m);
    }
    for (std::size_t w = 0; w < 7; ++w) {
        if (report.by_weekday[w].total_m() > 0.0) {
            mileage_row(out, std::string(weekday_name(static_cast<Weekday>(w))), report.by_weekday[w]);
        }
    }
    mileage_row(out, "overall", report.overall);
    out << "reference,,,,," << format_fixed(kReferenceMileageShares[0], 4) << ','
        << format_fixed(kReferenceMileageShares[1], 4) << ',' << format_fixed(kReferenceMileageShares[2], 4) << '\n';
    out << "# rides " << report.rides << ", unroutable " << report.unroutable.size() << '\n';
}

void write_follow_up_report(std::ostream& out, const FollowUpStats& stats)
{
    out << "scope,during_ride,during_return,at_pob,unclassified,during_ride_share,during_return_share,at_pob_share\n";
    const auto row = [&](std::string_view label, const FollowUpCounts& c) {
        out << label << ',' << c.count[0] << ',' << c.count[1] << ',' << c.count[2] << ',' << c.unclassified << ','
            << format_fixed(c.share(FollowUp::DuringRide), 4) << ','
            << format_fixed(c.share(FollowUp::DuringReturn), 4) << ',' << format_fixed(c.share(FollowUp::AtPoB), 4)
            << '\n';
    };
    for (std::size_t w = 0; w < 7; ++w) {
        row(weekday_name(static_cast<Weekday>(w)), stats.by_weekday[w]);
    }
    row("overall", stats.overall());
}

} // namespace ridesim
