#pragma once

#include "ridesim/geo.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ridesim {

inline constexpr int kNoise = -1;

/// DBSCAN over great-circle distance. A point is core when at least `min_pts`
/// points (itself included) lie within `eps_m`. Clusters are numbered from 0
/// in scan order; a border point joins the first cluster that reaches it.
/// Noise is labelled kNoise.
std::vector<int> dbscan(std::span<const LatLon> points, double eps_m, std::size_t min_pts);

/// Core flags under the same neighbourhood rule.
std::vector<bool> dbscan_core_points(std::span<const LatLon> points, double eps_m, std::size_t min_pts);

struct Hotspot {
    int id = 0;
    LatLon centroid;
    std::size_t members = 0;
};

struct HotspotSet {
    std::vector<Hotspot> hotspots;
    double eps_m = 0.0;
    std::size_t min_pts = 0;
    std::size_t target_count = 0;
    std::size_t input_points = 0;
    std::vector<std::string> warnings;

    [[nodiscard]] bool empty() const { return hotspots.empty(); }
    [[nodiscard]] std::size_t size() const { return hotspots.size(); }
};

inline constexpr double kMinSearchEps = 50.0;
inline constexpr double kMaxSearchEps = 5000.0;

/// Clusters at a fixed eps; clusters smaller than min_pts are dropped and the
/// remaining ids made dense. Centroid = arithmetic mean of member lat/lon.
HotspotSet hotspots_at(std::span<const LatLon> pickups, double eps_m, std::size_t min_pts);

/// Searches eps in [50 m, 5000 m] for the cluster count closest to
/// `target_count` (ties go to the smaller eps). Adds a warning when the best
/// count is more than 50% away from the target. Throws DataError on empty input.
HotspotSet derive_hotspots(std::span<const LatLon> pickups, std::size_t target_count = 60,
                           std::size_t min_pts = 10);

/// Evenly strided subset of at most `max_points` points, order preserved.
/// DBSCAN at large eps is quadratic, so a year of pickups is thinned first.
std::vector<LatLon> thin_points(std::span<const LatLon> points, std::size_t max_points);

/// Hotspot id minimizing great-circle distance; ties go to the lowest id.
/// Throws DataError on an empty set.
int nearest_hotspot(const HotspotSet& set, LatLon location);

/// CSV `id,lat,lon,member_count` plus a JSON sidecar with eps/min_pts.
void write_hotspots(const HotspotSet& set, const std::string& csv_path);
HotspotSet load_hotspots(const std::string& csv_path);
std::string hotspot_meta_path(const std::string& csv_path);

} // namespace ridesim
