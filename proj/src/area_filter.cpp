#include "ridesim/error.hpp"
#include "ridesim/logbook.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ridesim {

Polygon::Polygon(std::vector<LatLon> ring) : ring_(std::move(ring))
{
    if (ring_.size() > 1 && ring_.front() == ring_.back()) {
        ring_.pop_back();
    }
    std::vector<LatLon> distinct;
    for (const auto& p : ring_) {
        if (!is_finite(p)) {
            throw DataError("polygon vertex is not finite");
        }
        if (std::find(distinct.begin(), distinct.end(), p) == distinct.end()) {
            distinct.push_back(p);
        }
    }
    if (distinct.size() < 3) {
        throw DataError("degenerate polygon: fewer than 3 distinct vertices");
    }
}

bool Polygon::contains(LatLon p) const
{
    bool inside = false;
    const std::size_t n = ring_.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const LatLon& a = ring_[i];
        const LatLon& b = ring_[j];
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (p.lon < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

namespace {

const nlohmann::json* find_polygon_coords(const nlohmann::json& j)
{
    if (!j.is_object()) {
        return nullptr;
    }
    const std::string type = j.value("type", "");
    if (type == "Polygon") {
        return j.contains("coordinates") ? &j.at("coordinates") : nullptr;
    }
    if (type == "MultiPolygon") {
        const auto& c = j.at("coordinates");
        return c.is_array() && !c.empty() ? &c.at(0) : nullptr;
    }
    if (type == "Feature") {
        return j.contains("geometry") ? find_polygon_coords(j.at("geometry")) : nullptr;
    }
    if (type == "FeatureCollection") {
        const auto it = j.find("features");
        if (it == j.end() || !it->is_array()) {
            return nullptr;
        }
        for (const auto& f : *it) {
            if (const auto* c = find_polygon_coords(f)) {
                return c;
            }
        }
    }
    return nullptr;
}

} // namespace

Polygon parse_polygon(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("boundary: ") + e.what());
    }
    const auto* coords = find_polygon_coords(j);
    if (!coords || !coords->is_array() || coords->empty()) {
        throw DataError("boundary: no polygon geometry found");
    }
    std::vector<LatLon> ring;
    try {
        for (const auto& pt : coords->at(0)) {
            ring.push_back({pt.at(1).get<double>(), pt.at(0).get<double>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("boundary: bad coordinate: ") + e.what());
    }
    return Polygon(std::move(ring));
}

Polygon load_polygon(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open boundary " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_polygon(ss.str());
}

AreaFilterResult filter_out_of_area(std::span<const Shift> shifts, const Polygon& boundary)
{
    AreaFilterResult r;
    for (const auto& s : shifts) {
        const bool inside = std::all_of(s.rides.begin(), s.rides.end(), [&](const RideOrder& o) {
            return boundary.contains(o.pickup_location) && boundary.contains(o.dropoff_location);
        });
        (inside ? r.kept : r.dismissed).push_back(s);
    }
    return r;
}

} // namespace ridesim
