#pragma once

// Downlink traffic generation and per-UE FIFO queues. Two models: full buffer
// (one fixed-size packet per UE per slot) and FTP model 3 (Poisson packet
// arrivals per UE). Arrivals materialize at slot boundaries.

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "beamhop/rng.hpp"

namespace beamhop {

struct Packet {
    std::uint64_t packet_id = 0;
    int ue_id = -1;
    std::uint64_t size_bits = 0;
    int arrival_slot = 0;
    std::uint64_t bits_remaining = 0;
    std::optional<int> completion_slot;  // set exactly when bits_remaining reaches 0
};

struct UeQueue {
    int ue_id = -1;
    std::deque<Packet> packets;          // FIFO by arrival
    std::uint64_t backlog_bits = 0;      // sum of bits_remaining over packets
};

// Appends one packet of packet_size_bits per UE.
void full_buffer_step(std::vector<UeQueue>& queues, int slot, std::uint64_t packet_size_bits,
                      std::uint64_t& next_packet_id);

// Per-UE Poisson streams, one independent generator per ue_id so that results
// do not depend on queue ordering or parallel generation.
class Ftp3Streams {
public:
    explicit Ftp3Streams(std::uint64_t seed) : seed_(seed) {}

    SplitMix64& stream_for(int ue_id);

private:
    std::uint64_t seed_;
    std::unordered_map<int, SplitMix64> streams_;
};

// Draws the slot's arrival count per UE from Poisson(rate * slot length).
void ftp3_step(std::vector<UeQueue>& queues, int slot, double arrival_rate_per_s,
               std::uint64_t packet_size_bits, double slot_length_s, Ftp3Streams& rng,
               std::uint64_t& next_packet_id);

struct DrainResult {
    std::uint64_t bits_consumed = 0;
    std::vector<Packet> completed;  // packets finished this call, in FIFO order
};

// FIFO service: removes up to served_bits from the queue; packets that reach
// zero remaining bits get completion_slot = slot. Service beyond the backlog
// is discarded.
DrainResult drain(UeQueue& queue, std::uint64_t served_bits, int slot);

}  // namespace beamhop
