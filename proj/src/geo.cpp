#include "ridesim/geo.hpp"

#include <algorithm>

namespace ridesim {

double haversine_m(LatLon a, LatLon b)
{
    const double phi1 = deg2rad(a.lat);
    const double phi2 = deg2rad(b.lat);
    const double dphi = phi2 - phi1;
    const double dlambda = deg2rad(b.lon - a.lon);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double bearing_deg(LatLon from, LatLon to)
{
    const double phi1 = deg2rad(from.lat);
    const double phi2 = deg2rad(to.lat);
    const double dlambda = deg2rad(to.lon - from.lon);
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    double deg = rad2deg(std::atan2(y, x));
    if (deg < 0.0) {
        deg += 360.0;
    }
    return deg;
}

LatLon lerp(LatLon a, LatLon b, double t)
{
    return {a.lat + (b.lat - a.lat) * t, a.lon + (b.lon - a.lon) * t};
}

LatLon offset_m(LatLon origin, double east_m, double north_m)
{
    const double dlat = rad2deg(north_m / kEarthRadiusM);
    const double dlon = rad2deg(east_m / (kEarthRadiusM * std::cos(deg2rad(origin.lat))));
    return {origin.lat + dlat, origin.lon + dlon};
}

bool is_finite(LatLon p)
{
    return std::isfinite(p.lat) && std::isfinite(p.lon);
}

} // namespace ridesim
