#include "beamhop/layout.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace beamhop {

std::vector<Spotbeam> assign_spotbeams(const SatelliteState& sat,
                                       std::span<const UeRecord> reporting_ues, int max_beams,
                                       double diameter_km) {
    std::vector<Spotbeam> beams;
    if (max_beams <= 0 || reporting_ues.empty()) return beams;

    const double radius_km = diameter_km / 2.0;

    // Near to distant, ties by ue_id to keep the ordering deterministic.
    std::vector<std::pair<double, const UeRecord*>> order;
    order.reserve(reporting_ues.size());
    for (const UeRecord& ue : reporting_ues)
        order.emplace_back(slant_distance_km(ue.position, sat), &ue);
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->ue_id < b.second->ue_id;
    });

    for (const auto& [dist, ue] : order) {
        bool covered = false;
        for (const Spotbeam& beam : beams) {
            if (great_circle_km(ue->position, beam.center) <= radius_km) {
                covered = true;
                break;
            }
        }
        if (covered) continue;
        if (static_cast<int>(beams.size()) == max_beams) break;

        Spotbeam beam;
        beam.beam_id = static_cast<int>(beams.size());
        beam.satellite_id = sat.satellite_id;
        beam.center = ue->position;
        beam.diameter_km = diameter_km;
        beams.push_back(beam);
    }

    // Membership is geometric: every reporting UE within the beam footprint.
    for (Spotbeam& beam : beams) {
        for (const UeRecord& ue : reporting_ues) {
            if (great_circle_km(ue.position, beam.center) <= radius_km)
                beam.member_ues.push_back(ue.ue_id);
        }
        std::sort(beam.member_ues.begin(), beam.member_ues.end());
    }
    return beams;
}

std::map<int, BeamRef> associate_ues(std::span<const UeRecord> ues,
                                     std::span<const SatelliteState> sats,
                                     std::span<const std::vector<Spotbeam>> beams_per_satellite,
                                     double min_elevation_deg) {
    std::unordered_map<int, std::size_t> sat_index;
    for (std::size_t i = 0; i < sats.size(); ++i) sat_index.emplace(sats[i].satellite_id, i);

    std::map<int, BeamRef> mapping;
    for (const UeRecord& ue : ues) {
        const std::vector<int> visible = visible_satellites(ue.position, sats, min_elevation_deg);
        if (visible.empty()) continue;
        const std::size_t m = sat_index.at(visible.front());

        const Spotbeam* best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const Spotbeam& beam : beams_per_satellite[m]) {
            const double d = great_circle_km(ue.position, beam.center);
            if (d > beam.diameter_km / 2.0) continue;
            if (d < best_dist || (d == best_dist && best && beam.beam_id < best->beam_id)) {
                best = &beam;
                best_dist = d;
            }
        }
        if (best) mapping[ue.ue_id] = BeamRef{best->satellite_id, best->beam_id};
    }
    return mapping;
}

}  // namespace beamhop
