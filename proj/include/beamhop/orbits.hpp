#pragma once

// Walker constellation construction, circular two-body propagation, and
// UE-to-satellite geometry (look angles, slant range, visibility).

#include <span>
#include <vector>

#include "beamhop/geo.hpp"

namespace beamhop {

// Walker-delta constellation i:M/P/F with RAAN spread over the full 360 degrees.
struct WalkerConstellation {
    int total_satellites = 2400;  // M
    int planes = 60;              // P
    double inclination_deg = 55.0;
    double altitude_km = 600.0;
    int phasing_factor = 1;  // F, inter-plane phase offset in units of 360/M degrees

    bool operator==(const WalkerConstellation&) const = default;
};

// One satellite at one instant. The orbital elements are carried so that
// propagation does not have to recover them from the position vector.
struct SatelliteState {
    int satellite_id = 0;
    int plane_index = 0;
    int in_plane_index = 0;
    Vec3 ecef_position_km{};
    double epoch_time_s = 0.0;

    double raan_deg = 0.0;
    double inclination_deg = 0.0;
    double arg_latitude_deg = 0.0;  // angle from the ascending node along the orbit
    double altitude_km = 0.0;
};

struct LookAngles {
    double elevation_deg = 0.0;  // above the local horizontal plane
    double azimuth_deg = 0.0;    // clockwise from local north, [0, 360)
};

// Position on a circular orbit from its plane orientation and phase angle.
Vec3 orbital_position(double raan_deg, double inclination_deg, double arg_latitude_deg,
                      double radius_km);

// Builds the full constellation at the given epoch. Satellites are numbered
// plane-major: id = plane * (M/P) + slot. Throws std::invalid_argument when
// M is not divisible by P or a parameter is out of range.
std::vector<SatelliteState> build_walker(const WalkerConstellation& config, double epoch_s = 0.0);

// Circular two-body motion: advances the phase angle at rate sqrt(mu/r^3).
// Radius is preserved exactly; dt must be >= 0.
SatelliteState propagate(const SatelliteState& state, double dt_s);

LookAngles elevation_azimuth(const GeodeticPoint& ue, const SatelliteState& sat);

// Straight-line range from the UE to the satellite, km.
double slant_distance_km(const GeodeticPoint& ue, const SatelliteState& sat);

// Satellite ids visible from the UE at or above min_elevation_deg, ordered by
// slant distance ascending, ties by satellite_id. Empty result means uncovered.
std::vector<int> visible_satellites(const GeodeticPoint& ue, std::span<const SatelliteState> sats,
                                    double min_elevation_deg);

}  // namespace beamhop
