#include "beamhop/traffic.hpp"

namespace beamhop {

namespace {

void push_packet(UeQueue& queue, int slot, std::uint64_t size_bits, std::uint64_t& next_packet_id) {
    Packet packet;
    packet.packet_id = next_packet_id++;
    packet.ue_id = queue.ue_id;
    packet.size_bits = size_bits;
    packet.arrival_slot = slot;
    packet.bits_remaining = size_bits;
    queue.packets.push_back(packet);
    queue.backlog_bits += size_bits;
}

}  // namespace

void full_buffer_step(std::vector<UeQueue>& queues, int slot, std::uint64_t packet_size_bits,
                      std::uint64_t& next_packet_id) {
    for (UeQueue& queue : queues) push_packet(queue, slot, packet_size_bits, next_packet_id);
}

SplitMix64& Ftp3Streams::stream_for(int ue_id) {
    auto it = streams_.find(ue_id);
    if (it == streams_.end())
        it = streams_.emplace(ue_id, SplitMix64(stream_seed(seed_, static_cast<std::uint64_t>(ue_id))))
                 .first;
    return it->second;
}

void ftp3_step(std::vector<UeQueue>& queues, int slot, double arrival_rate_per_s,
               std::uint64_t packet_size_bits, double slot_length_s, Ftp3Streams& rng,
               std::uint64_t& next_packet_id) {
    for (UeQueue& queue : queues) {
        const int arrivals = poisson_sample(rng.stream_for(queue.ue_id), arrival_rate_per_s * slot_length_s);
        for (int i = 0; i < arrivals; ++i) push_packet(queue, slot, packet_size_bits, next_packet_id);
    }
}

DrainResult drain(UeQueue& queue, std::uint64_t served_bits, int slot) {
    DrainResult result;
    std::uint64_t budget = served_bits;
    while (budget > 0 && !queue.packets.empty()) {
        Packet& head = queue.packets.front();
        const std::uint64_t take = std::min(budget, head.bits_remaining);
        head.bits_remaining -= take;
        queue.backlog_bits -= take;
        budget -= take;
        result.bits_consumed += take;
        if (head.bits_remaining == 0) {
            head.completion_slot = slot;
            result.completed.push_back(head);
            queue.packets.pop_front();
        }
    }
    return result;
}

}  // namespace beamhop
