#include "beamhop/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace beamhop {

const char* to_string(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::kDistanceLimit: return "distance_limit";
        case SchedulerKind::kNoLimit: return "no_limit";
        case SchedulerKind::kRoundRobin: return "round_robin";
    }
    return "?";
}

const char* to_string(TrafficKind kind) {
    switch (kind) {
        case TrafficKind::kFullBuffer: return "full_buffer";
        case TrafficKind::kFtp3: return "ftp3";
    }
    return "?";
}

SlotClock SlotClock::make(double horizon_s, double slot_length_s) {
    if (horizon_s <= 0.0 || slot_length_s <= 0.0)
        throw std::invalid_argument("clock: horizon_s and slot_length_s must be positive");
    const double ratio = horizon_s / slot_length_s;
    const int count = static_cast<int>(std::llround(ratio));
    if (count < 1 || std::abs(ratio - count) > 1e-9 * ratio)
        throw std::invalid_argument("clock: horizon_s must be a whole number of slots");
    return SlotClock{horizon_s, slot_length_s, count, 0};
}

double serve_bits(double sinr_linear, const BandProfile& band, double slot_length_s, double share,
                  const PhyModel& phy) {
    if (sinr_linear < 0.0) throw std::domain_error("serve_bits: sinr must be >= 0");
    if (share <= 0.0 || share > 1.0) throw std::domain_error("serve_bits: share must be in (0, 1]");
    const double spectral_efficiency =
        std::min(std::log2(1.0 + sinr_linear), phy.spectral_efficiency_cap_bps_hz);
    return slot_length_s * share * phy.efficiency * band.bandwidth_mhz * 1e6 * spectral_efficiency;
}

std::map<int, double> intra_beam_share(std::span<const int> served_ues,
                                       const std::vector<UeQueue>& queues,
                                       BeamServiceCursor& cursor) {
    std::map<int, double> shares;
    if (served_ues.empty()) return shares;
    cursor.next %= served_ues.size();
    for (std::size_t i = 0; i < served_ues.size(); ++i) {
        const std::size_t idx = (cursor.next + i) % served_ues.size();
        const int ue_id = served_ues[idx];
        if (queues[static_cast<std::size_t>(ue_id)].backlog_bits > 0) {
            shares[ue_id] = 1.0;
            cursor.next = (idx + 1) % served_ues.size();
            return shares;
        }
    }
    return shares;  // nothing backlogged; cursor untouched
}

Simulation::Simulation(Scene scene, EngineParams params)
    : scene_(std::move(scene)),
      params_(params),
      clock_(SlotClock::make(params.horizon_s, params.slot_length_s)),
      ftp3_streams_(params.seed) {
    const std::size_t sat_count = scene_.satellites.size();
    const std::size_t ue_count = scene_.ues.size();

    for (std::size_t m = 0; m < sat_count; ++m) {
        if (scene_.satellites[m].satellite_id != static_cast<int>(m))
            throw std::invalid_argument("scene: satellites must be indexed by satellite_id");
    }
    for (std::size_t j = 0; j < ue_count; ++j) {
        if (scene_.ues[j].ue_id != static_cast<int>(j))
            throw std::invalid_argument("scene: ues must be indexed by ue_id");
    }

    queues_.resize(ue_count);
    for (std::size_t j = 0; j < ue_count; ++j) queues_[j].ue_id = static_cast<int>(j);

    beam_offsets_.resize(sat_count, 0);
    demand_inputs_.resize(sat_count);
    served_ues_.resize(sat_count);
    share_cursors_.resize(sat_count);
    rr_cursors_.resize(sat_count);
    decisions_.resize(sat_count);
    for (std::size_t m = 0; m < sat_count; ++m) {
        beam_offsets_[m] = total_beams_;
        total_beams_ += scene_.beams[m].size();
        const std::size_t beam_count = scene_.beams[m].size();
        served_ues_[m].resize(beam_count);
        share_cursors_[m].resize(beam_count);
        demand_inputs_[m].reserve(beam_count);
        for (std::size_t k = 0; k < beam_count; ++k) {
            if (scene_.beams[m][k].beam_id != static_cast<int>(k))
                throw std::invalid_argument("scene: beams must be indexed by beam_id");
            demand_inputs_[m].emplace_back(scene_.beams[m][k],
                                           BeamDemand{static_cast<int>(k), 0});
        }
    }

    for (const UeRecord& ue : scene_.ues) {
        if (ue.serving_satellite < 0) continue;
        served_ues_[static_cast<std::size_t>(ue.serving_satellite)]
                   [static_cast<std::size_t>(ue.serving_beam)]
                       .push_back(ue.ue_id);
    }
    // ue ids are appended in ascending order already; keep that explicit
    for (auto& per_sat : served_ues_)
        for (auto& list : per_sat) std::sort(list.begin(), list.end());

    acc_.per_satellite.resize(sat_count);
    acc_.offered_bits.assign(ue_count, 0);
    acc_.demanded_bits.assign(ue_count, 0);

    noise_mw_ = noise_power_mw(scene_.band);
    rebuild_gain_cache();
}

void Simulation::rebuild_gain_cache() {
    const std::size_t ue_count = scene_.ues.size();
    gain_linear_.assign(ue_count * total_beams_, 0.0);
    for (std::size_t m = 0; m < scene_.satellites.size(); ++m) {
        const SatelliteState& sat = scene_.satellites[m];
        for (std::size_t k = 0; k < scene_.beams[m].size(); ++k) {
            const std::size_t flat = beam_offsets_[m] + k;
            const GeodeticPoint& center = scene_.beams[m][k].center;
            for (std::size_t j = 0; j < ue_count; ++j) {
                gain_at(j, flat) = db_to_linear(
                    channel_gain_db(center, scene_.ues[j].position, sat, scene_.band, scene_.array));
            }
        }
    }
    ue_sinr_.assign(ue_count, 0.0);
}

void Simulation::apply_traffic(int slot) {
    const std::size_t before = next_packet_id_;
    if (params_.traffic == TrafficKind::kFullBuffer) {
        full_buffer_step(queues_, slot, params_.packet_size_bits, next_packet_id_);
    } else {
        ftp3_step(queues_, slot, params_.arrival_rate_per_s, params_.packet_size_bits,
                  params_.slot_length_s, ftp3_streams_, next_packet_id_);
    }
    const std::uint64_t arrivals = next_packet_id_ - before;
    acc_.arrived_packets += arrivals;
    if (arrivals > 0) {
        for (const UeQueue& queue : queues_) {
            for (auto it = queue.packets.rbegin(); it != queue.packets.rend(); ++it) {
                if (it->arrival_slot != slot) break;
                acc_.demanded_bits[static_cast<std::size_t>(queue.ue_id)] += it->size_bits;
            }
        }
    }
}

void Simulation::build_schedules(int slot) {
    for (std::size_t m = 0; m < scene_.satellites.size(); ++m) {
        for (std::size_t k = 0; k < demand_inputs_[m].size(); ++k) {
            std::uint64_t priority = 0;
            for (int ue_id : served_ues_[m][k])
                priority = std::max(priority, queues_[static_cast<std::size_t>(ue_id)].backlog_bits);
            demand_inputs_[m][k].second.priority_bits = priority;
        }

        const int sat_id = static_cast<int>(m);
        switch (params_.scheduler) {
            case SchedulerKind::kDistanceLimit:
                decisions_[m] = schedule_distance_limit(demand_inputs_[m], params_.i_max,
                                                        params_.distance_limit_km, params_.p_max_w,
                                                        sat_id, slot);
                break;
            case SchedulerKind::kNoLimit:
                decisions_[m] = schedule_no_limit(demand_inputs_[m], params_.i_max, params_.p_max_w,
                                                  sat_id, slot);
                break;
            case SchedulerKind::kRoundRobin:
                decisions_[m] = schedule_round_robin(demand_inputs_[m], params_.i_max,
                                                     params_.p_max_w, sat_id, slot, rr_cursors_[m]);
                break;
        }
        // Legality re-checked at consumption time, every slot.
        check_decision(decisions_[m], params_.i_max, params_.p_max_w);
        acc_.per_satellite[m].illuminated_sum += decisions_[m].illuminated.size();
    }
}

void Simulation::evaluate_sinr() {
    std::fill(ue_sinr_.begin(), ue_sinr_.end(), 0.0);

    // Lit transmitters this slot, power in mW.
    std::vector<std::pair<std::size_t, double>> lit;
    for (std::size_t m = 0; m < decisions_.size(); ++m) {
        for (int beam_id : decisions_[m].illuminated)
            lit.emplace_back(beam_offsets_[m] + static_cast<std::size_t>(beam_id),
                             decisions_[m].power_w.at(beam_id) * 1000.0);
    }

    for (std::size_t m = 0; m < decisions_.size(); ++m) {
        for (int beam_id : decisions_[m].illuminated) {
            const std::size_t serving_flat = beam_offsets_[m] + static_cast<std::size_t>(beam_id);
            const double serving_power_mw = decisions_[m].power_w.at(beam_id) * 1000.0;
            for (int ue_id : served_ues_[m][static_cast<std::size_t>(beam_id)]) {
                const std::size_t j = static_cast<std::size_t>(ue_id);
                double interference_mw = 0.0;
                for (const auto& [flat, power_mw] : lit) {
                    if (flat == serving_flat) continue;
                    interference_mw += power_mw * gain_at(j, flat);
                }
                const double signal_mw = serving_power_mw * gain_at(j, serving_flat);
                const double sinr = signal_mw / (noise_mw_ + interference_mw);
                ue_sinr_[j] = sinr;
                acc_.sinr_db_samples.push_back(linear_to_db(sinr));
            }
        }
    }
}

void Simulation::serve_and_drain(int slot) {
    for (std::size_t m = 0; m < decisions_.size(); ++m) {
        std::uint64_t sat_bits = 0;
        for (int beam_id : decisions_[m].illuminated) {
            const std::size_t k = static_cast<std::size_t>(beam_id);
            const auto shares = intra_beam_share(served_ues_[m][k], queues_, share_cursors_[m][k]);
            for (const auto& [ue_id, share] : shares) {
                const std::size_t j = static_cast<std::size_t>(ue_id);
                const double bits_real =
                    serve_bits(ue_sinr_[j], scene_.band, params_.slot_length_s, share, params_.phy);
                const std::uint64_t budget = static_cast<std::uint64_t>(bits_real);
                if (budget == 0) continue;
                const DrainResult drained = drain(queues_[j], budget, slot);
                sat_bits += drained.bits_consumed;
                acc_.offered_bits[j] += drained.bits_consumed;
                for (const Packet& packet : drained.completed) {
                    acc_.packet_lifetimes_s.push_back(
                        (static_cast<double>(*packet.completion_slot - packet.arrival_slot) + 1.0) *
                        params_.slot_length_s);
                    ++acc_.completed_packets;
                }
            }
        }
        acc_.per_satellite[m].served_bits += sat_bits;
        acc_.per_satellite[m].served_bits_per_slot.push_back(sat_bits);
    }
}

void Simulation::run_slot() {
    if (clock_.current_slot >= clock_.slot_count)
        throw std::logic_error("run_slot: horizon already reached");
    const int slot = clock_.current_slot;

    if (params_.live_propagation && slot > 0) {
        for (SatelliteState& sat : scene_.satellites) sat = propagate(sat, params_.slot_length_s);
        rebuild_gain_cache();
    }

    apply_traffic(slot);
    build_schedules(slot);
    evaluate_sinr();
    serve_and_drain(slot);

    ++acc_.slots_run;
    ++clock_.current_slot;
}

void Simulation::run() {
    while (clock_.current_slot < clock_.slot_count) run_slot();
}

void Simulation::verify_conservation() const {
    for (const UeQueue& queue : queues_) {
        const std::size_t j = static_cast<std::size_t>(queue.ue_id);
        if (acc_.offered_bits[j] + queue.backlog_bits != acc_.demanded_bits[j])
            throw std::logic_error("bit conservation violated for ue " + std::to_string(queue.ue_id));
    }
}

MetricsReport Simulation::finalize() const {
    verify_conservation();
    return finalize_metrics(acc_, clock_.horizon_s);
}

MetricsReport finalize_metrics(const MetricsAccumulator& acc, double horizon_s) {
    MetricsReport report;
    report.horizon_s = horizon_s;
    report.slots_run = acc.slots_run;

    double throughput_sum = 0.0;
    double illuminated_sum = 0.0;
    for (std::size_t m = 0; m < acc.per_satellite.size(); ++m) {
        const SatelliteAccumulator& sat = acc.per_satellite[m];
        SatelliteReport entry;
        entry.satellite_id = static_cast<int>(m);
        entry.served_bits = sat.served_bits;
        entry.throughput_bps = static_cast<double>(sat.served_bits) / horizon_s;
        entry.mean_illuminated =
            acc.slots_run > 0 ? static_cast<double>(sat.illuminated_sum) / acc.slots_run : 0.0;
        throughput_sum += entry.throughput_bps;
        illuminated_sum += entry.mean_illuminated;
        report.per_satellite.push_back(entry);
    }
    if (!acc.per_satellite.empty()) {
        report.mean_satellite_throughput_bps =
            throughput_sum / static_cast<double>(acc.per_satellite.size());
        report.mean_illuminated = illuminated_sum / static_cast<double>(acc.per_satellite.size());
    }

    report.sinr_db_samples = acc.sinr_db_samples;
    report.packet_lifetimes_s = acc.packet_lifetimes_s;
    report.completed_packets = acc.completed_packets;
    report.incomplete_packets = acc.arrived_packets - acc.completed_packets;

    std::uint64_t offered_total = 0;
    std::uint64_t demanded_total = 0;
    for (std::size_t j = 0; j < acc.offered_bits.size(); ++j) {
        UeSatisfaction ue;
        ue.ue_id = static_cast<int>(j);
        ue.offered_bits = acc.offered_bits[j];
        ue.demanded_bits = acc.demanded_bits[j];
        ue.satisfaction = ue.demanded_bits == 0 ? 1.0
                                                : static_cast<double>(ue.offered_bits) /
                                                      static_cast<double>(ue.demanded_bits);
        offered_total += ue.offered_bits;
        demanded_total += ue.demanded_bits;
        report.per_ue.push_back(ue);
    }
    report.total_offered_bits = offered_total;
    report.total_demanded_bits = demanded_total;
    if (demanded_total > 0)
        report.system_satisfaction =
            static_cast<double>(offered_total) / static_cast<double>(demanded_total);
    return report;
}

}  // namespace beamhop
