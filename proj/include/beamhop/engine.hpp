#pragma once

// Slotted simulation loop. Each slot: traffic arrivals, per-satellite
// scheduling from current backlogs, SINR evaluation for every UE whose serving
// beam is lit (interference across all satellites' decisions), capped-Shannon
// service with FIFO queue drain, and metric accumulation.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "beamhop/link.hpp"
#include "beamhop/traffic.hpp"

namespace beamhop {

enum class SchedulerKind { kDistanceLimit, kNoLimit, kRoundRobin };
enum class TrafficKind { kFullBuffer, kFtp3 };

const char* to_string(SchedulerKind kind);
const char* to_string(TrafficKind kind);

struct SlotClock {
    double horizon_s = 1.0;
    double slot_length_s = 0.001;
    int slot_count = 1000;
    int current_slot = 0;

    // Validates that the horizon divides into whole slots.
    static SlotClock make(double horizon_s, double slot_length_s);
};

// Replaces the full NR PHY/MAC stack: rate = efficiency * bandwidth *
// min(log2(1 + sinr), cap). Monotone in SINR, which is what the scheduling
// comparisons depend on.
struct PhyModel {
    double efficiency = 0.75;
    double spectral_efficiency_cap_bps_hz = 7.4;

    bool operator==(const PhyModel&) const = default;
};

// Bits deliverable in one slot to a UE at the given SINR with the given share
// of the beam. sinr = 0 yields 0 bits.
double serve_bits(double sinr_linear, const BandProfile& band, double slot_length_s, double share,
                  const PhyModel& phy);

struct BeamServiceCursor {
    std::size_t next = 0;
};

// Round-robin service inside one lit beam: exactly one backlogged UE gets
// share 1.0, cycling by ue_id; empty when no member has backlog. served_ues
// must be sorted; queues is indexed by ue_id.
std::map<int, double> intra_beam_share(std::span<const int> served_ues,
                                       const std::vector<UeQueue>& queues,
                                       BeamServiceCursor& cursor);

struct EngineParams {
    SchedulerKind scheduler = SchedulerKind::kDistanceLimit;
    TrafficKind traffic = TrafficKind::kFullBuffer;
    int i_max = 40;
    double distance_limit_km = 42.0;
    double p_max_w = 300.0;
    std::uint64_t packet_size_bits = 4'000'000;
    double arrival_rate_per_s = 8.0;
    double slot_length_s = 0.001;
    double horizon_s = 1.0;
    std::uint64_t seed = 1;
    PhyModel phy{};
    bool live_propagation = false;  // frozen epoch positions by default
};

// Immutable world snapshot the engine runs on. Index conventions:
// satellites[m].satellite_id == m, beams[m][k].beam_id == k, ues[j].ue_id == j.
struct Scene {
    std::vector<SatelliteState> satellites;
    std::vector<std::vector<Spotbeam>> beams;
    std::vector<UeRecord> ues;
    BandProfile band;
    ArrayGeometry array;
};

struct SatelliteAccumulator {
    std::uint64_t served_bits = 0;
    std::vector<std::uint64_t> served_bits_per_slot;
    std::uint64_t illuminated_sum = 0;
};

struct MetricsAccumulator {
    std::vector<SatelliteAccumulator> per_satellite;
    std::vector<double> sinr_db_samples;
    std::vector<double> packet_lifetimes_s;
    std::uint64_t arrived_packets = 0;
    std::uint64_t completed_packets = 0;
    std::vector<std::uint64_t> offered_bits;   // indexed by ue_id
    std::vector<std::uint64_t> demanded_bits;  // indexed by ue_id
    int slots_run = 0;
};

struct SatelliteReport {
    int satellite_id = -1;
    std::uint64_t served_bits = 0;
    double throughput_bps = 0.0;
    double mean_illuminated = 0.0;
};

struct UeSatisfaction {
    int ue_id = -1;
    std::uint64_t offered_bits = 0;
    std::uint64_t demanded_bits = 0;
    double satisfaction = 1.0;  // offered/demanded, 1 when nothing was demanded
};

struct MetricsReport {
    std::vector<SatelliteReport> per_satellite;
    double mean_satellite_throughput_bps = 0.0;
    double mean_illuminated = 0.0;
    std::vector<double> sinr_db_samples;
    std::vector<double> packet_lifetimes_s;
    std::uint64_t completed_packets = 0;
    std::uint64_t incomplete_packets = 0;
    std::vector<UeSatisfaction> per_ue;
    std::optional<double> system_satisfaction;  // empty when nothing was demanded
    std::uint64_t total_offered_bits = 0;
    std::uint64_t total_demanded_bits = 0;
    double horizon_s = 0.0;
    int slots_run = 0;
};

MetricsReport finalize_metrics(const MetricsAccumulator& acc, double horizon_s);

class Simulation {
public:
    Simulation(Scene scene, EngineParams params);

    void run_slot();
    void run();  // runs all remaining slots

    const Scene& scene() const { return scene_; }
    const SlotClock& clock() const { return clock_; }
    const MetricsAccumulator& metrics() const { return acc_; }
    const std::vector<ScheduleDecision>& last_decisions() const { return decisions_; }
    const std::vector<UeQueue>& queues() const { return queues_; }

    // Per-UE arrived == served + backlog, in exact integer bits. Throws
    // std::logic_error naming the UE on violation.
    void verify_conservation() const;

    MetricsReport finalize() const;

private:
    void rebuild_gain_cache();
    void apply_traffic(int slot);
    void build_schedules(int slot);
    void evaluate_sinr();
    void serve_and_drain(int slot);

    double& gain_at(std::size_t ue, std::size_t flat_beam) {
        return gain_linear_[ue * total_beams_ + flat_beam];
    }

    Scene scene_;
    EngineParams params_;
    SlotClock clock_;

    std::vector<UeQueue> queues_;  // index == ue_id
    Ftp3Streams ftp3_streams_;
    std::uint64_t next_packet_id_ = 0;

    std::vector<std::vector<BeamWithDemand>> demand_inputs_;    // [sat][beam]
    std::vector<std::vector<std::vector<int>>> served_ues_;     // [sat][beam], sorted ue ids
    std::vector<RoundRobinCursor> rr_cursors_;                  // per satellite
    std::vector<std::vector<BeamServiceCursor>> share_cursors_; // [sat][beam]

    std::vector<ScheduleDecision> decisions_;  // last slot, index == satellite_id
    std::vector<std::size_t> beam_offsets_;    // flat gain-cache offset per satellite
    std::size_t total_beams_ = 0;
    std::vector<double> gain_linear_;  // [ue * total_beams + flat_beam]
    double noise_mw_ = 0.0;
    std::vector<double> ue_sinr_;  // last slot, 0 where not evaluated

    MetricsAccumulator acc_;
};

}  // namespace beamhop
