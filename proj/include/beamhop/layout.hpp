#pragma once

// Earth-fixed spotbeam placement and UE association. Each satellite directs
// beams at its reporting UEs in near-to-distant order, skipping UEs already
// covered, until it runs out of beams or UEs. A UE is served by its closest
// visible satellite and by that satellite's nearest covering beam.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "beamhop/orbits.hpp"

namespace beamhop {

struct Spotbeam {
    int beam_id = -1;       // unique within the owning satellite's beam set
    int satellite_id = -1;
    GeodeticPoint center{};
    double diameter_km = 42.0;
    std::vector<int> member_ues;  // sorted; every reporting UE within diameter/2 of center
};

struct UeRecord {
    int ue_id = -1;
    GeodeticPoint position{};
    int serving_satellite = -1;  // -1 while unassociated / uncovered
    int serving_beam = -1;
    std::string band_profile_id;
};

struct BeamRef {
    int satellite_id = -1;
    int beam_id = -1;

    bool operator==(const BeamRef&) const = default;
};

// Greedy beam placement for one satellite. reporting_ues are the UEs whose
// closest visible satellite is this one; they are processed in ascending
// slant distance (ties by ue_id). A beam is centered on the triggering UE's
// position. Coverage tests use great-circle distance against diameter/2.
std::vector<Spotbeam> assign_spotbeams(const SatelliteState& sat,
                                       std::span<const UeRecord> reporting_ues, int max_beams,
                                       double diameter_km);

// Maps each coverable UE to (closest visible satellite, nearest covering beam
// of that satellite). Ties: lower satellite_id, then lower beam_id. UEs with
// no visible satellite or no covering beam on their closest one are absent.
std::map<int, BeamRef> associate_ues(std::span<const UeRecord> ues,
                                     std::span<const SatelliteState> sats,
                                     std::span<const std::vector<Spotbeam>> beams_per_satellite,
                                     double min_elevation_deg);

}  // namespace beamhop
