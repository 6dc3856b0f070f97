#include "beamhop/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace beamhop {

namespace {

void finish(ScheduleDecision& decision, double p_max_w) {
    std::sort(decision.illuminated.begin(), decision.illuminated.end());
    allocate_power(decision, p_max_w);
}

}  // namespace

ScheduleDecision schedule_distance_limit(std::span<const BeamWithDemand> beams, int i_max,
                                         double distance_limit_km, double p_max_w,
                                         int satellite_id, int slot) {
    ScheduleDecision decision;
    decision.satellite_id = satellite_id;
    decision.slot = slot;

    std::vector<const BeamWithDemand*> candidates;
    candidates.reserve(beams.size());
    for (const BeamWithDemand& b : beams)
        if (b.second.priority_bits > 0) candidates.push_back(&b);

    std::vector<const Spotbeam*> lit;
    while (!candidates.empty() && static_cast<int>(lit.size()) < i_max) {
        // Highest demand first, ties toward the lower beam id.
        auto best = std::min_element(
            candidates.begin(), candidates.end(), [](const auto* a, const auto* b) {
                if (a->second.priority_bits != b->second.priority_bits)
                    return a->second.priority_bits > b->second.priority_bits;
                return a->second.beam_id < b->second.beam_id;
            });
        const BeamWithDemand* pick = *best;
        candidates.erase(best);

        bool clear = true;
        for (const Spotbeam* other : lit) {
            if (great_circle_km(pick->first.center, other->center) <= distance_limit_km) {
                clear = false;
                break;
            }
        }
        if (clear) {
            lit.push_back(&pick->first);
            decision.illuminated.push_back(pick->second.beam_id);
        }
    }

    finish(decision, p_max_w);
    return decision;
}

ScheduleDecision schedule_no_limit(std::span<const BeamWithDemand> beams, int i_max, double p_max_w,
                                   int satellite_id, int slot) {
    ScheduleDecision decision;
    decision.satellite_id = satellite_id;
    decision.slot = slot;

    std::vector<const BeamWithDemand*> candidates;
    for (const BeamWithDemand& b : beams)
        if (b.second.priority_bits > 0) candidates.push_back(&b);

    std::sort(candidates.begin(), candidates.end(), [](const auto* a, const auto* b) {
        if (a->second.priority_bits != b->second.priority_bits)
            return a->second.priority_bits > b->second.priority_bits;
        return a->second.beam_id < b->second.beam_id;
    });
    const std::size_t take = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(i_max));
    for (std::size_t i = 0; i < take; ++i) decision.illuminated.push_back(candidates[i]->second.beam_id);

    finish(decision, p_max_w);
    return decision;
}

ScheduleDecision schedule_round_robin(std::span<const BeamWithDemand> beams, int i_max,
                                      double p_max_w, int satellite_id, int slot,
                                      RoundRobinCursor& cursor) {
    ScheduleDecision decision;
    decision.satellite_id = satellite_id;
    decision.slot = slot;
    if (beams.empty() || i_max <= 0) return decision;

    std::vector<int> ids;
    ids.reserve(beams.size());
    for (const BeamWithDemand& b : beams) ids.push_back(b.second.beam_id);
    std::sort(ids.begin(), ids.end());

    cursor.next %= ids.size();
    const std::size_t take = std::min<std::size_t>(ids.size(), static_cast<std::size_t>(i_max));
    for (std::size_t i = 0; i < take; ++i)
        decision.illuminated.push_back(ids[(cursor.next + i) % ids.size()]);
    cursor.next = (cursor.next + static_cast<std::size_t>(i_max)) % ids.size();

    finish(decision, p_max_w);
    return decision;
}

ScheduleDecision& allocate_power(ScheduleDecision& decision, double p_max_w) {
    decision.power_w.clear();
    if (decision.illuminated.empty()) return decision;
    const double share = p_max_w / static_cast<double>(decision.illuminated.size());
    for (int beam_id : decision.illuminated) decision.power_w[beam_id] = share;
    return decision;
}

void check_decision(const ScheduleDecision& decision, int i_max, double p_max_w) {
    if (static_cast<int>(decision.illuminated.size()) > i_max)
        throw std::logic_error("schedule violates the per-slot beam count limit (satellite " +
                               std::to_string(decision.satellite_id) + ", slot " +
                               std::to_string(decision.slot) + ")");
    // 1 ULP per addend of slack for the even split accumulating back up.
    const double slack = p_max_w * 1e-12 * (1.0 + static_cast<double>(decision.power_w.size()));
    if (decision.total_power_w() > p_max_w + slack)
        throw std::logic_error("schedule violates the satellite power budget (satellite " +
                               std::to_string(decision.satellite_id) + ", slot " +
                               std::to_string(decision.slot) + ")");
    if (decision.power_w.size() != decision.illuminated.size())
        throw std::logic_error("schedule power map does not cover exactly the lit beams");
    for (const auto& [beam_id, p] : decision.power_w) {
        if (!decision.is_illuminated(beam_id) || p <= 0.0)
            throw std::logic_error("schedule allocates power to a dimmed beam or a non-positive power");
    }
}

}  // namespace beamhop
