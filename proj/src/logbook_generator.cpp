#include "ridesim/logbook_generator.hpp"

#include "ridesim/error.hpp"
#include "ridesim/random.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace ridesim {

std::vector<RideOrder> SyntheticLogbook::orders() const
{
    std::vector<RideOrder> out;
    for (const auto& v : vehicles) {
        for (const auto& s : v.shifts) {
            out.insert(out.end(), s.rides.begin(), s.rides.end());
        }
    }
    return out;
}

std::size_t SyntheticLogbook::shift_count() const
{
    std::size_t n = 0;
    for (const auto& v : vehicles) {
        n += v.shifts.size();
    }
    return n;
}

std::int64_t reference_day_number(Weekday day)
{
    return day_number_from_civil(2024, 1, 1) + static_cast<int>(day);
}

namespace {

std::string vehicle_name(std::size_t index, std::size_t fleet_size)
{
    const int width = std::max<int>(2, static_cast<int>(std::to_string(fleet_size).size()));
    char buf[32];
    std::snprintf(buf, sizeof buf, "V%0*zu", width, index + 1);
    return buf;
}

Shift moved_by_days(const Shift& s, std::int64_t days)
{
    Shift out = s;
    const std::int64_t d = days * kSecondsPerDay;
    for (auto& r : out.rides) {
        r.order_time = r.order_time.plus_seconds(d);
        r.pickup_time = r.pickup_time.plus_seconds(d);
        r.dropoff_time = r.dropoff_time.plus_seconds(d);
    }
    return out;
}

bool fits(const VehicleSchedule& v, const Shift& s, std::int64_t min_gap_s)
{
    if (v.shifts.size() >= kMaxShiftsPerVehicle) {
        return false;
    }
    for (const auto& other : v.shifts) {
        const bool before = s.start().unix_s - other.end().unix_s >= min_gap_s;
        const bool after = other.start().unix_s - s.end().unix_s >= min_gap_s;
        if (!before && !after) {
            return false;
        }
    }
    return true;
}

void finalize(SyntheticLogbook& book)
{
    for (auto& v : book.vehicles) {
        std::stable_sort(v.shifts.begin(), v.shifts.end(),
                         [](const Shift& a, const Shift& b) { return a.start() < b.start(); });
        int n = 0;
        for (auto& s : v.shifts) {
            s.id = v.vehicle_id + "#" + std::to_string(++n);
            s.vehicle_id = v.vehicle_id;
            for (auto& r : s.rides) {
                r.vehicle_id = v.vehicle_id;
                r.shift_id = s.id;
            }
        }
    }
}

} // namespace

SyntheticLogbook generate_logbook(std::span<const Shift> source, Weekday day, std::size_t fleet_size,
                                  std::uint64_t seed, std::chrono::seconds min_gap)
{
    if (fleet_size == 0) {
        throw DataError("fleet_size must be at least 1");
    }
    struct RideRef {
        std::uint32_t shift;
        std::uint32_t ride;
    };
    std::vector<RideRef> pool;
    for (std::size_t s = 0; s < source.size(); ++s) {
        for (std::size_t r = 0; r < source[s].rides.size(); ++r) {
            if (local_weekday(source[s].rides[r].order_time) == day) {
                pool.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(r)});
            }
        }
    }
    if (pool.empty()) {
        throw DataError("no source ride on " + std::string(weekday_name(day)));
    }

    SyntheticLogbook book;
    book.day = day;
    book.fleet_size = fleet_size;
    book.seed = seed;
    book.vehicles.push_back({vehicle_name(0, fleet_size), {}});

    Rng rng(stream_seed(seed, "generate_logbook"));
    const std::int64_t target_day = reference_day_number(day);
    bool fleet_full = false;
    while (!pool.empty()) {
        const RideRef pick = pool[uniform_index(rng, pool.size())];
        // remove every ride of the chosen shift, keeping the rest in order
        std::erase_if(pool, [&](const RideRef& r) { return r.shift == pick.shift; });

        const Shift& src = source[pick.shift];
        const Shift moved =
            moved_by_days(src, target_day - local_day_number(src.rides[pick.ride].order_time));
        if (!fits(book.vehicles.back(), moved, min_gap.count())) {
            if (book.vehicles.size() == fleet_size) {
                fleet_full = true;
                break;
            }
            book.vehicles.push_back({vehicle_name(book.vehicles.size(), fleet_size), {}});
        }
        book.vehicles.back().shifts.push_back(moved);
    }
    if (!fleet_full && book.vehicles.size() < fleet_size) {
        book.warnings.push_back("source exhausted: populated " + std::to_string(book.vehicles.size()) + " of " +
                                std::to_string(fleet_size) + " vehicles");
    }
    finalize(book);
    return book;
}

SyntheticLogbook logbook_from_orders(std::span<const RideOrder> orders)
{
    SyntheticLogbook book;
    const bool has_shift_ids =
        !orders.empty() && std::all_of(orders.begin(), orders.end(), [](const RideOrder& o) { return !o.shift_id.empty(); });
    std::vector<Shift> shifts;
    if (has_shift_ids) {
        std::map<std::string, std::size_t> index;
        for (const auto& o : orders) {
            auto [it, inserted] = index.try_emplace(o.shift_id, shifts.size());
            if (inserted) {
                shifts.push_back({o.shift_id, o.vehicle_id, {}});
            }
            Shift& s = shifts[it->second];
            if (s.vehicle_id != o.vehicle_id) {
                throw LogbookError("shift " + o.shift_id + " spans vehicles " + s.vehicle_id + " and " + o.vehicle_id);
            }
            s.rides.push_back(o);
        }
        for (auto& s : shifts) {
            std::stable_sort(s.rides.begin(), s.rides.end(),
                             [](const RideOrder& a, const RideOrder& b) { return a.order_time < b.order_time; });
        }
    } else {
        shifts = extract_shifts(orders);
    }

    std::map<std::string, std::size_t> vehicle_index;
    for (auto& s : shifts) {
        auto [it, inserted] = vehicle_index.try_emplace(s.vehicle_id, book.vehicles.size());
        if (inserted) {
            book.vehicles.push_back({s.vehicle_id, {}});
        }
        book.vehicles[it->second].shifts.push_back(std::move(s));
    }
    std::sort(book.vehicles.begin(), book.vehicles.end(),
              [](const VehicleSchedule& a, const VehicleSchedule& b) { return a.vehicle_id < b.vehicle_id; });
    for (auto& v : book.vehicles) {
        std::stable_sort(v.shifts.begin(), v.shifts.end(),
                         [](const Shift& a, const Shift& b) { return a.start() < b.start(); });
    }
    book.fleet_size = book.vehicles.size();
    if (!orders.empty()) {
        book.day = local_weekday(orders.front().order_time);
    }
    return book;
}

} // namespace ridesim
