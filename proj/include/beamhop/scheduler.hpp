#pragma once

// Per-slot beam illumination and power allocation. Three schemes:
//   distance_limit - greedy by demand, never lighting two beams whose centers
//                    are within D km of each other (the proposed scheme),
//   no_limit       - greedy by demand with the distance test dropped,
//   round_robin    - demand-blind cyclic pattern.
// All schemes split the satellite power budget evenly over lit beams.

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "beamhop/layout.hpp"

namespace beamhop {

struct ScheduleDecision {
    int satellite_id = -1;
    int slot = -1;
    std::vector<int> illuminated;   // beam ids, sorted ascending, |.| <= i_max
    std::map<int, double> power_w;  // defined exactly on illuminated beams; sums to <= p_max

    bool is_illuminated(int beam_id) const {
        return std::binary_search(illuminated.begin(), illuminated.end(), beam_id);
    }
    double total_power_w() const {
        double sum = 0.0;
        for (const auto& [id, p] : power_w) sum += p;
        return sum;
    }
};

struct BeamDemand {
    int beam_id = -1;
    std::uint64_t priority_bits = 0;  // max queued backlog over the beam's UEs
};

using BeamWithDemand = std::pair<Spotbeam, BeamDemand>;

// Greedy with pairwise distance constraint: repeatedly take the highest-demand
// remaining beam; light it iff its center is strictly farther than
// distance_limit_km (great circle) from every already-lit center, else discard
// it for this slot. Stops at i_max lit beams or when candidates run out.
// Beams with zero demand are never candidates. Ties break toward lower beam_id.
ScheduleDecision schedule_distance_limit(std::span<const BeamWithDemand> beams, int i_max,
                                         double distance_limit_km, double p_max_w,
                                         int satellite_id, int slot);

// Same greedy with the distance test always passing: the top-i_max beams by
// demand are lit.
ScheduleDecision schedule_no_limit(std::span<const BeamWithDemand> beams, int i_max, double p_max_w,
                                   int satellite_id, int slot);

struct RoundRobinCursor {
    std::size_t next = 0;
};

// Lights the next i_max beams in cyclic beam_id order starting at the cursor,
// then advances the cursor by i_max modulo the beam count. Demand is ignored.
ScheduleDecision schedule_round_robin(std::span<const BeamWithDemand> beams, int i_max,
                                      double p_max_w, int satellite_id, int slot,
                                      RoundRobinCursor& cursor);

// Even power split over the lit beams; empty decisions stay at zero power.
ScheduleDecision& allocate_power(ScheduleDecision& decision, double p_max_w);

// Throws std::logic_error naming the violated constraint when the decision
// breaks the per-slot beam-count or power budget.
void check_decision(const ScheduleDecision& decision, int i_max, double p_max_w);

}  // namespace beamhop
