#pragma once

// Spherical-earth geometry primitives shared by the whole simulator.

#include <cmath>
#include <numbers>

namespace beamhop {

// Spherical earth radius, km.
inline constexpr double kEarthRadiusKm = 6371.0;
// Earth gravitational parameter, km^3/s^2.
inline constexpr double kEarthMuKm3S2 = 398600.4418;

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    return {v.x / n, v.y / n, v.z / n};
}

// Ground (or near-ground) position. Latitude in [-90, 90], longitude in (-180, 180].
struct GeodeticPoint {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    double altitude_km = 0.0;

    bool operator==(const GeodeticPoint&) const = default;
};

// Spherical-earth conversion to an earth-centered cartesian frame, km.
Vec3 geodetic_to_ecef(const GeodeticPoint& p);

// Great-circle distance between two ground points, km. Ignores point altitudes.
double great_circle_km(const GeodeticPoint& a, const GeodeticPoint& b);

}  // namespace beamhop
