#ifndef MANET_TRAFFIC_H
#define MANET_TRAFFIC_H

#include "manet/types.h"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace manet
{

struct TrafficConfig
{
    std::size_t flows = 10;
    double rate = 4.0; // packets/s
    std::size_t packetSize = 512; // bytes
    Time start = 10.0;
    Time stop = 990.0;

    void Validate(Time horizon) const;
};

/// Constant-bit-rate source.
struct Flow
{
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    double rate = 4.0;
    std::size_t packetSize = 512;
    Time start = 0.0;
    Time stop = 0.0;

    bool operator==(const Flow&) const = default;
};

/// Time of the i-th packet of a flow.
inline Time
FlowTickTime(const Flow& flow, std::uint64_t i)
{
    return flow.start + static_cast<double>(i) / flow.rate;
}

/// Packets emitted at start, start + 1/rate, ... strictly before stop.
std::uint64_t FlowPacketCount(const Flow& flow);

/**
 * Draws cfg.flows distinct ordered (src, dst) pairs uniformly without
 * replacement. Throws std::invalid_argument when fewer than two nodes exist or
 * more flows are requested than there are pairs.
 */
std::vector<Flow> SampleFlows(std::size_t nodes, const TrafficConfig& cfg, std::uint64_t seed);

} // namespace manet

#endif // MANET_TRAFFIC_H
