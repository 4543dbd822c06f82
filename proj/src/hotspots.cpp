#include "ridesim/hotspots.hpp"

#include "ridesim/csv.hpp"
#include "ridesim/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unordered_map>

namespace ridesim {

namespace {

// Equirectangular buckets sized a little above eps; a 3x3 block of cells
// around a point then covers every haversine neighbour.
class NeighbourGrid {
public:
    NeighbourGrid(std::span<const LatLon> pts, double eps_m) : pts_(pts), eps_(eps_m)
    {
        if (pts.empty()) {
            return;
        }
        double lat_min = pts[0].lat;
        double lat_max = pts[0].lat;
        for (const auto& p : pts) {
            lat_min = std::min(lat_min, p.lat);
            lat_max = std::max(lat_max, p.lat);
        }
        // the smallest cos(lat) over the data keeps lon cells wide enough
        const double worst_lat = std::max(std::abs(lat_min), std::abs(lat_max));
        const double cell_m = eps_m * 1.02;
        dlat_ = rad2deg(cell_m / kEarthRadiusM);
        dlon_ = rad2deg(cell_m / (kEarthRadiusM * std::max(std::cos(deg2rad(worst_lat)), 1e-6)));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            cells_[key(cell(pts[i]))].push_back(static_cast<std::uint32_t>(i));
        }
    }

    // Calls f(j) for each neighbour j of i (including i) until f returns false.
    template <typename F>
    void for_neighbours(std::size_t i, F&& f) const
    {
        const auto [cx, cy] = cell(pts_[i]);
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(key({cx + dx, cy + dy}));
                if (it == cells_.end()) {
                    continue;
                }
                for (const auto j : it->second) {
                    if (haversine_m(pts_[i], pts_[j]) <= eps_ && !f(j)) {
                        return;
                    }
                }
            }
        }
    }

private:
    [[nodiscard]] std::pair<long, long> cell(LatLon p) const
    {
        return {static_cast<long>(std::floor(p.lon / dlon_)), static_cast<long>(std::floor(p.lat / dlat_))};
    }
    static std::uint64_t key(std::pair<long, long> c)
    {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.first)) << 32) |
               static_cast<std::uint32_t>(c.second);
    }

    std::span<const LatLon> pts_;
    double eps_;
    double dlat_ = 1.0;
    double dlon_ = 1.0;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

std::vector<bool> core_flags(const NeighbourGrid& grid, std::size_t n, std::size_t min_pts)
{
    std::vector<bool> core(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t count = 0;
        grid.for_neighbours(i, [&](std::uint32_t) { return ++count < min_pts; });
        core[i] = count >= min_pts;
    }
    return core;
}

} // namespace

std::vector<bool> dbscan_core_points(std::span<const LatLon> points, double eps_m, std::size_t min_pts)
{
    const NeighbourGrid grid(points, eps_m);
    return core_flags(grid, points.size(), std::max<std::size_t>(min_pts, 1));
}

std::vector<int> dbscan(std::span<const LatLon> points, double eps_m, std::size_t min_pts)
{
    const std::size_t n = points.size();
    std::vector<int> label(n, kNoise);
    if (n == 0) {
        return label;
    }
    const NeighbourGrid grid(points, eps_m);
    const auto core = core_flags(grid, n, std::max<std::size_t>(min_pts, 1));

    int next = 0;
    std::vector<std::uint32_t> queue;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i] != kNoise || !core[i]) {
            continue;
        }
        const int c = next++;
        label[i] = c;
        queue.assign(1, static_cast<std::uint32_t>(i));
        for (std::size_t q = 0; q < queue.size(); ++q) {
            const std::uint32_t p = queue[q];
            if (!core[p]) {
                continue;
            }
            grid.for_neighbours(p, [&](std::uint32_t j) {
                if (label[j] == kNoise) {
                    label[j] = c;
                    queue.push_back(j);
                }
                return true;
            });
        }
    }
    return label;
}

HotspotSet hotspots_at(std::span<const LatLon> pickups, double eps_m, std::size_t min_pts)
{
    const auto labels = dbscan(pickups, eps_m, min_pts);
    int clusters = 0;
    for (int l : labels) {
        clusters = std::max(clusters, l + 1);
    }
    std::vector<double> lat(static_cast<std::size_t>(clusters), 0.0);
    std::vector<double> lon(static_cast<std::size_t>(clusters), 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(clusters), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == kNoise) {
            continue;
        }
        const auto c = static_cast<std::size_t>(labels[i]);
        lat[c] += pickups[i].lat;
        lon[c] += pickups[i].lon;
        ++count[c];
    }
    HotspotSet set;
    set.eps_m = eps_m;
    set.min_pts = min_pts;
    set.input_points = pickups.size();
    for (std::size_t c = 0; c < count.size(); ++c) {
        if (count[c] < min_pts) {
            continue;
        }
        const double k = static_cast<double>(count[c]);
        set.hotspots.push_back({static_cast<int>(set.hotspots.size()), {lat[c] / k, lon[c] / k}, count[c]});
    }
    return set;
}

HotspotSet derive_hotspots(std::span<const LatLon> pickups, std::size_t target_count, std::size_t min_pts)
{
    if (pickups.empty()) {
        throw DataError("derive_hotspots: no pickup locations");
    }
    const auto distance = [&](const HotspotSet& s) {
        return std::abs(static_cast<long>(s.size()) - static_cast<long>(target_count));
    };
    const auto better = [&](const HotspotSet& a, const HotspotSet& b) {
        return distance(a) < distance(b) || (distance(a) == distance(b) && a.eps_m < b.eps_m);
    };

    HotspotSet best = hotspots_at(pickups, kMinSearchEps, min_pts);
    const auto consider = [&](HotspotSet s) {
        if (better(s, best)) {
            best = std::move(s);
        }
    };
    consider(hotspots_at(pickups, kMaxSearchEps, min_pts));

    // Cluster count is not monotone in eps, but rises with eps at small radii
    // (more cores) and falls at large ones (merging). Bisect in log space on
    // "too many clusters -> larger eps", keeping the best seen.
    double lo = std::log(kMinSearchEps);
    double hi = std::log(kMaxSearchEps);
    for (int iter = 0; iter < 24 && distance(best) != 0; ++iter) {
        const double mid = 0.5 * (lo + hi);
        HotspotSet s = hotspots_at(pickups, std::round(std::exp(mid) * 10.0) / 10.0, min_pts);
        const bool too_many = s.size() > target_count;
        consider(std::move(s));
        if (too_many) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    best.target_count = target_count;
    const double off = std::abs(static_cast<double>(best.size()) - static_cast<double>(target_count));
    if (off > 0.5 * static_cast<double>(target_count)) {
        best.warnings.push_back("best eps " + format_fixed(best.eps_m, 1) + " m yields " +
                                std::to_string(best.size()) + " hotspots, target " + std::to_string(target_count));
    }
    return best;
}

std::vector<LatLon> thin_points(std::span<const LatLon> points, std::size_t max_points)
{
    if (max_points == 0 || points.size() <= max_points) {
        return {points.begin(), points.end()};
    }
    std::vector<LatLon> out;
    out.reserve(max_points);
    for (std::size_t k = 0; k < max_points; ++k) {
        out.push_back(points[k * points.size() / max_points]);
    }
    return out;
}

int nearest_hotspot(const HotspotSet& set, LatLon location)
{
    if (set.empty()) {
        throw DataError("nearest_hotspot: empty hotspot set");
    }
    int best = set.hotspots.front().id;
    double best_d = haversine_m(set.hotspots.front().centroid, location);
    for (const auto& h : set.hotspots) {
        const double d = haversine_m(h.centroid, location);
        if (d < best_d || (d == best_d && h.id < best)) {
            best = h.id;
            best_d = d;
        }
    }
    return best;
}

std::string hotspot_meta_path(const std::string& csv_path)
{
    std::filesystem::path p(csv_path);
    p.replace_extension(".meta.json");
    return p.string();
}

void write_hotspots(const HotspotSet& set, const std::string& csv_path)
{
    std::ofstream out(csv_path);
    if (!out) {
        throw DataError("cannot write " + csv_path);
    }
    out << "id,lat,lon,member_count\n";
    for (const auto& h : set.hotspots) {
        out << h.id << ',' << format_fixed(h.centroid.lat, 7) << ',' << format_fixed(h.centroid.lon, 7) << ','
            << h.members << '\n';
    }
    nlohmann::json meta = {{"eps_m", set.eps_m},
                           {"min_pts", set.min_pts},
                           {"target_count", set.target_count},
                           {"input_points", set.input_points},
                           {"hotspot_count", set.size()},
                           {"metric", "haversine"},
                           {"warnings", set.warnings}};
    std::ofstream side(hotspot_meta_path(csv_path));
    side << meta.dump(2) << '\n';
}

HotspotSet load_hotspots(const std::string& csv_path)
{
    const CsvDocument doc = read_csv_file(csv_path);
    const auto c_id = doc.column("id");
    const auto c_lat = doc.column("lat");
    const auto c_lon = doc.column("lon");
    const auto c_n = doc.column("member_count");
    if (!c_id || !c_lat || !c_lon) {
        throw DataError(csv_path + ": hotspot CSV needs id, lat, lon columns");
    }
    HotspotSet set;
    for (const auto& row : doc.rows) {
        const auto get = [&](std::size_t c) -> std::string_view {
            return c < row.fields.size() ? std::string_view(row.fields[c]) : std::string_view();
        };
        const auto id = parse_int(get(*c_id));
        const auto lat = parse_double(get(*c_lat));
        const auto lon = parse_double(get(*c_lon));
        if (!id || !lat || !lon) {
            throw DataError(csv_path + ": malformed row at line " + std::to_string(row.line));
        }
        std::size_t members = 0;
        if (c_n) {
            members = static_cast<std::size_t>(parse_int(get(*c_n)).value_or(0));
        }
        if (*id != static_cast<std::int64_t>(set.hotspots.size())) {
            throw DataError(csv_path + ": hotspot ids must be dense from 0 (line " + std::to_string(row.line) + ")");
        }
        set.hotspots.push_back({static_cast<int>(*id), {*lat, *lon}, members});
    }
    std::ifstream side(hotspot_meta_path(csv_path));
    if (side) {
        try {
            const auto meta = nlohmann::json::parse(side);
            set.eps_m = meta.value("eps_m", 0.0);
            set.min_pts = meta.value("min_pts", std::size_t{0});
            set.target_count = meta.value("target_count", std::size_t{0});
            set.input_points = meta.value("input_points", std::size_t{0});
        } catch (const nlohmann::json::exception& e) {
            throw DataError(hotspot_meta_path(csv_path) + ": " + e.what());
        }
    }
    return set;
}

} // namespace ridesim
