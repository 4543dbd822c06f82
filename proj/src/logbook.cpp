#include "ridesim/logbook.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"

#include <array>
#include <fstream>
#include <ostream>

namespace ridesim {

namespace {

constexpr std::array<const char*, 10> kRequired = {"order_time",   "vehicle_id", "accept_lat", "accept_lon",
                                                   "pickup_time",  "pickup_lat", "pickup_lon", "dropoff_time",
                                                   "dropoff_lat",  "dropoff_lon"};

std::string fmt_coord(double v)
{
    return format_fixed(v, 6);
}

} // namespace

LogbookParseResult parse_logbook(std::istream& in)
{
    const CsvDocument doc = read_csv(in);
    std::array<std::size_t, kRequired.size()> col{};
    for (std::size_t i = 0; i < kRequired.size(); ++i) {
        const auto c = doc.column(kRequired[i]);
        if (!c) {
            throw LogbookError(std::string("logbook is missing column '") + kRequired[i] + "'");
        }
        col[i] = *c;
    }
    const auto id_col = doc.column("order_id");
    const auto shift_col = doc.column("shift_id");

    LogbookParseResult result;
    for (const auto& row : doc.rows) {
        const auto field = [&](std::size_t idx) -> const std::string& {
            if (idx >= row.fields.size()) {
                throw LogbookError("line " + std::to_string(row.line) + ": too few fields");
            }
            return row.fields[idx];
        };
        const auto ts = [&](std::size_t k) {
            const auto t = parse_timestamp(field(col[k]));
            if (!t) {
                throw LogbookError("line " + std::to_string(row.line) + ": malformed timestamp in " + kRequired[k] +
                                   ": '" + field(col[k]) + "'");
            }
            return *t;
        };
        const auto num = [&](std::size_t k) {
            const auto v = parse_double(field(col[k]));
            if (!v) {
                throw LogbookError("line " + std::to_string(row.line) + ": malformed number in " + kRequired[k]);
            }
            return *v;
        };
        RideOrder o;
        o.order_time = ts(0);
        o.vehicle_id = field(col[1]);
        o.accept_location = {num(2), num(3)};
        o.pickup_time = ts(4);
        o.pickup_location = {num(5), num(6)};
        o.dropoff_time = ts(7);
        o.dropoff_location = {num(8), num(9)};
        o.order_id = id_col && !field(*id_col).empty() ? field(*id_col) : "L" + std::to_string(row.line);
        if (shift_col && *shift_col < row.fields.size()) {
            o.shift_id = row.fields[*shift_col];
        }
        if (o.vehicle_id.empty()) {
            result.rejected.push_back({row.line, "empty vehicle_id"});
        } else if (!(o.order_time <= o.pickup_time && o.pickup_time <= o.dropoff_time)) {
            result.rejected.push_back({row.line, "times not ordered: order_time <= pickup_time <= dropoff_time"});
        } else if (!is_finite(o.accept_location) || !is_finite(o.pickup_location) || !is_finite(o.dropoff_location)) {
            result.rejected.push_back({row.line, "non-finite coordinate"});
        } else {
            result.orders.push_back(std::move(o));
        }
    }
    return result;
}

LogbookParseResult parse_logbook(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw LogbookError("cannot open logbook " + path);
    }
    return parse_logbook(in);
}

void write_logbook(std::ostream& out, std::span<const RideOrder> orders)
{
    out << "order_id,order_time,vehicle_id,accept_lat,accept_lon,pickup_time,pickup_lat,pickup_lon,"
           "dropoff_time,dropoff_lat,dropoff_lon,shift_id\n";
    for (const auto& o : orders) {
        out << csv_escape(o.order_id) << ',' << format_timestamp(o.order_time) << ',' << csv_escape(o.vehicle_id)
            << ',' << fmt_coord(o.accept_location.lat) << ',' << fmt_coord(o.accept_location.lon) << ','
            << format_timestamp(o.pickup_time) << ',' << fmt_coord(o.pickup_location.lat) << ','
            << fmt_coord(o.pickup_location.lon) << ',' << format_timestamp(o.dropoff_time) << ','
            << fmt_coord(o.dropoff_location.lat) << ',' << fmt_coord(o.dropoff_location.lon) << ','
            << csv_escape(o.shift_id) << '\n';
    }
}

void write_logbook(const std::string& path, std::span<const RideOrder> orders)
{
    std::ofstream out(path);
    if (!out) {
        throw LogbookError("cannot write " + path);
    }
    write_logbook(out, orders);
}

} // namespace ridesim
