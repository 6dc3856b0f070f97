#include "beamhop/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamhop {

Vec3 orbital_position(double raan_deg, double inclination_deg, double arg_latitude_deg,
                      double radius_km) {
    const double raan = deg_to_rad(raan_deg);
    const double incl = deg_to_rad(inclination_deg);
    const double u = deg_to_rad(arg_latitude_deg);

    // In-plane position, x toward the ascending node.
    const double xp = radius_km * std::cos(u);
    const double yp = radius_km * std::sin(u);

    // Rotate by inclination about x, then by RAAN about z.
    const double ci = std::cos(incl), si = std::sin(incl);
    const double co = std::cos(raan), so = std::sin(raan);
    return {co * xp - so * ci * yp, so * xp + co * ci * yp, si * yp};
}

std::vector<SatelliteState> build_walker(const WalkerConstellation& config, double epoch_s) {
    if (config.total_satellites < 1 || config.planes < 1)
        throw std::invalid_argument("walker: total_satellites and planes must be positive");
    if (config.total_satellites % config.planes != 0)
        throw std::invalid_argument("walker: total_satellites must be divisible by planes");
    if (config.inclination_deg < 0.0 || config.inclination_deg > 180.0)
        throw std::invalid_argument("walker: inclination_deg must lie in [0, 180]");
    if (config.altitude_km <= 0.0)
        throw std::invalid_argument("walker: altitude_km must be positive");

    const int per_plane = config.total_satellites / config.planes;
    const double radius = kEarthRadiusKm + config.altitude_km;

    std::vector<SatelliteState> states;
    states.reserve(static_cast<std::size_t>(config.total_satellites));
    for (int p = 0; p < config.planes; ++p) {
        const double raan = 360.0 * p / config.planes;
        for (int s = 0; s < per_plane; ++s) {
            SatelliteState st;
            st.satellite_id = p * per_plane + s;
            st.plane_index = p;
            st.in_plane_index = s;
            st.raan_deg = raan;
            st.inclination_deg = config.inclination_deg;
            st.arg_latitude_deg =
                360.0 * s / per_plane + 360.0 * config.phasing_factor * p / config.total_satellites;
            st.altitude_km = config.altitude_km;
            st.epoch_time_s = epoch_s;
            st.ecef_position_km =
                orbital_position(st.raan_deg, st.inclination_deg, st.arg_latitude_deg, radius);
            states.push_back(st);
        }
    }
    return states;
}

SatelliteState propagate(const SatelliteState& state, double dt_s) {
    if (dt_s < 0.0) throw std::invalid_argument("propagate: dt_s must be >= 0");
    const double radius = kEarthRadiusKm + state.altitude_km;
    const double omega = std::sqrt(kEarthMuKm3S2 / (radius * radius * radius));  // rad/s

    SatelliteState out = state;
    out.epoch_time_s = state.epoch_time_s + dt_s;
    out.arg_latitude_deg = state.arg_latitude_deg + rad_to_deg(omega * dt_s);
    out.ecef_position_km =
        orbital_position(out.raan_deg, out.inclination_deg, out.arg_latitude_deg, radius);
    return out;
}

namespace {

// Local east/north/up basis at a ground point. Falls back to a fixed basis at
// the poles where east is undefined.
struct EnuBasis {
    Vec3 east, north, up;
};

EnuBasis enu_basis(const Vec3& ue_ecef) {
    const Vec3 up = normalized(ue_ecef);
    Vec3 east = cross(Vec3{0.0, 0.0, 1.0}, up);
    if (norm(east) < 1e-12) east = Vec3{0.0, 1.0, 0.0};
    east = normalized(east);
    const Vec3 north = cross(up, east);
    return {east, north, up};
}

}  // namespace

LookAngles elevation_azimuth(const GeodeticPoint& ue, const SatelliteState& sat) {
    const Vec3 ue_ecef = geodetic_to_ecef(ue);
    const EnuBasis enu = enu_basis(ue_ecef);
    const Vec3 dir = normalized(sat.ecef_position_km - ue_ecef);

    const double sin_el = std::clamp(dot(dir, enu.up), -1.0, 1.0);
    LookAngles angles;
    angles.elevation_deg = rad_to_deg(std::asin(sin_el));
    double az = rad_to_deg(std::atan2(dot(dir, enu.east), dot(dir, enu.north)));
    if (az < 0.0) az += 360.0;
    angles.azimuth_deg = az;
    return angles;
}

double slant_distance_km(const GeodeticPoint& ue, const SatelliteState& sat) {
    return norm(sat.ecef_position_km - geodetic_to_ecef(ue));
}

std::vector<int> visible_satellites(const GeodeticPoint& ue, std::span<const SatelliteState> sats,
                                    double min_elevation_deg) {
    std::vector<std::pair<double, int>> hits;
    for (const SatelliteState& sat : sats) {
        if (elevation_azimuth(ue, sat).elevation_deg >= min_elevation_deg)
            hits.emplace_back(slant_distance_km(ue, sat), sat.satellite_id);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<int> ids;
    ids.reserve(hits.size());
    for (const auto& [d, id] : hits) ids.push_back(id);
    return ids;
}

}  // namespace beamhop
