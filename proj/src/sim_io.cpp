#include "ridesim/sim_io.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ridesim {

namespace {

std::string coord(double v)
{
    return format_fixed(v, 7);
}

std::ofstream open_out(const std::filesystem::path& p)
{
    std::ofstream out(p);
    if (!out) {
        throw DataError("cannot write " + p.string());
    }
    return out;
}

class Row {
public:
    Row(const CsvDocument& doc, const CsvRow& row, const std::string& file) : doc_(doc), row_(row), file_(file) {}

    [[nodiscard]] const std::string& str(std::string_view col) const
    {
        const auto c = doc_.column(col);
        if (!c) {
            throw DataError(file_ + ": missing column '" + std::string(col) + "'");
        }
        if (*c >= row_.fields.size()) {
            throw DataError(file_ + ": line " + std::to_string(row_.line) + " too short");
        }
        return row_.fields[*c];
    }
    [[nodiscard]] std::int64_t integer(std::string_view col) const
    {
        const auto v = parse_int(str(col));
        if (!v) {
            throw DataError(file_ + ": line " + std::to_string(row_.line) + ": bad integer in " + std::string(col));
        }
        return *v;
    }
    [[nodiscard]] std::int64_t milli(std::string_view col) const
    {
        const auto v = parse_milli(str(col));
        if (!v) {
            throw DataError(file_ + ": line " + std::to_string(row_.line) + ": bad value in " + std::string(col));
        }
        return *v;
    }
    [[nodiscard]] double number(std::string_view col) const
    {
        const auto v = parse_double(str(col));
        if (!v) {
            throw DataError(file_ + ": line " + std::to_string(row_.line) + ": bad number in " + std::string(col));
        }
        return *v;
    }

private:
    const CsvDocument& doc_;
    const CsvRow& row_;
    const std::string& file_;
};

} // namespace

void write_trips(std::ostream& out, const SimOutput& output, const RoadGraph& graph)
{
    out << "vehicle_id,reason,order_id,shift_id,start_ms,end_ms,start_lat,start_lon,end_lat,end_lon,"
           "distance_m,duration_s,speed_factor,start_offset_m,end_trim_m,route\n";
    for (const auto& t : output.trips) {
        out << csv_escape(t.vehicle_id) << ',' << trip_reason_name(t.reason) << ',' << csv_escape(t.order_id) << ','
            << csv_escape(t.shift_id) << ',' << t.start_ms << ',' << t.end_ms << ',' << coord(t.start_pos.lat) << ','
            << coord(t.start_pos.lon) << ',' << coord(t.end_pos.lat) << ',' << coord(t.end_pos.lon) << ','
            << format_mm_as_m(t.distance_mm) << ',' << format_ms_as_s(t.duration_ms()) << ','
            << format_fixed(t.route.speed_factor, 6) << ',' << format_fixed(t.route.start_offset_m, 3) << ','
            << format_fixed(t.route.end_trim_m, 3) << ',';
        for (std::size_t i = 0; i < t.route.edges.size(); ++i) {
            out << (i ? " " : "") << graph.edge(t.route.edges[i]).id;
        }
        out << '\n';
    }
}

void write_orders(std::ostream& out, const SimOutput& output)
{
    out << "order_id,vehicle_id,shift_id,status,order_ms,delivered_ms,pickup_arrival_ms,pickup_ms,dropoff_ms,"
           "reference_pickup,reference_dropoff,note\n";
    for (const auto& o : output.orders) {
        out << csv_escape(o.order_id) << ',' << csv_escape(o.vehicle_id) << ',' << csv_escape(o.shift_id) << ','
            << (o.status == OrderStatus::Served ? "served" : "unroutable") << ',' << o.order_ms << ','
            << o.delivered_ms << ',' << o.pickup_arrival_ms << ',' << o.pickup_ms << ',' << o.dropoff_ms << ','
            << format_timestamp(o.reference_pickup) << ',' << format_timestamp(o.reference_dropoff) << ','
            << csv_escape(o.note) << '\n';
    }
}

void write_shifts(std::ostream& out, const SimOutput& output)
{
    out << "shift_id,vehicle_id,orders,served,start_ms,end_ms,duration_s,pickup_m,ride_m,rebalancing_m,total_m\n";
    for (const auto& s : output.shifts) {
        out << csv_escape(s.shift_id) << ',' << csv_escape(s.vehicle_id) << ',' << s.orders << ',' << s.served << ','
            << s.start_ms << ',' << s.end_ms << ',' << format_ms_as_s(s.duration_ms()) << ','
            << format_mm_as_m(s.pickup_mm) << ',' << format_mm_as_m(s.ride_mm) << ','
            << format_mm_as_m(s.rebalancing_mm) << ',' << format_mm_as_m(s.total_mm()) << '\n';
    }
}

void write_sim_output(const std::string& dir, const SimOutput& output, const RoadGraph& graph)
{
    const std::filesystem::path d(dir);
    std::filesystem::create_directories(d);
    {
        auto out = open_out(d / "trips.csv");
        write_trips(out, output, graph);
    }
    {
        auto out = open_out(d / "orders.csv");
        write_orders(out, output);
    }
    {
        auto out = open_out(d / "shifts.csv");
        write_shifts(out, output);
    }
}

SimOutput read_sim_output(const std::string& dir, const RoadGraph* graph)
{
    const std::filesystem::path d(dir);
    SimOutput out;

    const std::string trips_path = (d / "trips.csv").string();
    const CsvDocument trips = read_csv_file(trips_path);
    for (const auto& r : trips.rows) {
        const Row row(trips, r, trips_path);
        TripLog t;
        t.vehicle_id = row.str("vehicle_id");
        const auto reason = parse_trip_reason(row.str("reason"));
        if (!reason) {
            throw DataError(trips_path + ": line " + std::to_string(r.line) + ": unknown reason");
        }
        t.reason = *reason;
        t.order_id = row.str("order_id");
        t.shift_id = row.str("shift_id");
        t.start_ms = row.integer("start_ms");
        t.end_ms = row.integer("end_ms");
        t.start_pos = {row.number("start_lat"), row.number("start_lon")};
        t.end_pos = {row.number("end_lat"), row.number("end_lon")};
        t.distance_mm = row.milli("distance_m");
        t.route.speed_factor = row.number("speed_factor");
        t.route.start_offset_m = row.number("start_offset_m");
        t.route.end_trim_m = row.number("end_trim_m");
        t.route.total_length_m = t.distance_m();
        t.route.total_time_s = static_cast<double>(t.duration_ms()) / 1000.0;
        if (graph) {
            std::istringstream ids(row.str("route"));
            std::int64_t id = 0;
            while (ids >> id) {
                const auto e = graph->find_edge(id);
                if (!e) {
                    throw DataError(trips_path + ": line " + std::to_string(r.line) + ": unknown edge " +
                                    std::to_string(id));
                }
                t.route.edges.push_back(*e);
            }
        }
        out.trips.push_back(std::move(t));
    }

    const std::string orders_path = (d / "orders.csv").string();
    const CsvDocument orders = read_csv_file(orders_path);
    for (const auto& r : orders.rows) {
        const Row row(orders, r, orders_path);
        OrderOutcome o;
        o.order_id = row.str("order_id");
        o.vehicle_id = row.str("vehicle_id");
        o.shift_id = row.str("shift_id");
        o.status = row.str("status") == "served" ? OrderStatus::Served : OrderStatus::Unroutable;
        o.order_ms = row.integer("order_ms");
        o.delivered_ms = row.integer("delivered_ms");
        o.pickup_arrival_ms = row.integer("pickup_arrival_ms");
        o.pickup_ms = row.integer("pickup_ms");
        o.dropoff_ms = row.integer("dropoff_ms");
        const auto rp = parse_timestamp(row.str("reference_pickup"));
        const auto rd = parse_timestamp(row.str("reference_dropoff"));
        if (!rp || !rd) {
            throw DataError(orders_path + ": line " + std::to_string(r.line) + ": bad reference timestamp");
        }
        o.reference_pickup = *rp;
        o.reference_dropoff = *rd;
        o.note = row.str("note");
        out.utc_offset_s = rp->utc_offset_s;
        out.orders.push_back(std::move(o));
    }

    const std::string shifts_path = (d / "shifts.csv").string();
    const CsvDocument shifts = read_csv_file(shifts_path);
    for (const auto& r : shifts.rows) {
        const Row row(shifts, r, shifts_path);
        ShiftSummary s;
        s.shift_id = row.str("shift_id");
        s.vehicle_id = row.str("vehicle_id");
        s.orders = static_cast<std::size_t>(row.integer("orders"));
        s.served = static_cast<std::size_t>(row.integer("served"));
        s.start_ms = row.integer("start_ms");
        s.end_ms = row.integer("end_ms");
        s.pickup_mm = row.milli("pickup_m");
        s.ride_mm = row.milli("ride_m");
        s.rebalancing_mm = row.milli("rebalancing_m");
        out.shifts.push_back(std::move(s));
    }
    return out;
}

} // namespace ridesim
