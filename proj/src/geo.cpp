#include "beamhop/geo.hpp"

#include <algorithm>

namespace beamhop {

Vec3 geodetic_to_ecef(const GeodeticPoint& p) {
    const double r = kEarthRadiusKm + p.altitude_km;
    const double lat = deg_to_rad(p.latitude_deg);
    const double lon = deg_to_rad(p.longitude_deg);
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

double great_circle_km(const GeodeticPoint& a, const GeodeticPoint& b) {
    // Haversine on the spherical earth; stable for small separations.
    const double lat_a = deg_to_rad(a.latitude_deg);
    const double lat_b = deg_to_rad(b.latitude_deg);
    const double dlat = lat_b - lat_a;
    const double dlon = deg_to_rad(b.longitude_deg - a.longitude_deg);
    const double s_lat = std::sin(0.5 * dlat);
    const double s_lon = std::sin(0.5 * dlon);
    const double h = s_lat * s_lat + std::cos(lat_a) * std::cos(lat_b) * s_lon * s_lon;
    const double central = 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
    return kEarthRadiusKm * central;
}

}  // namespace beamhop
