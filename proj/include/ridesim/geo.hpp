#pragma once

#include <cmath>

namespace ridesim {

/// WGS84 position in decimal degrees.
struct LatLon {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const LatLon&, const LatLon&) = default;
};

inline constexpr double kEarthRadiusM = 6371008.8;
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Great-circle distance in meters.
double haversine_m(LatLon a, LatLon b);

/// Initial compass bearing from `from` to `to`, degrees clockwise from north in [0, 360).
double bearing_deg(LatLon from, LatLon to);

/// Linear interpolation in coordinate space; adequate for city-scale segments.
LatLon lerp(LatLon a, LatLon b, double t);

/// Point displaced by (east_m, north_m) using a local tangent-plane approximation.
LatLon offset_m(LatLon origin, double east_m, double north_m);

bool is_finite(LatLon p);

} // namespace ridesim
