#include "manet/traffic.h"

#include "manet/rng.h"

#include <stdexcept>
#include <string>
#include <unordered_map>

namespace manet
{

void
TrafficConfig::Validate(Time horizon) const
{
    if (!(rate > 0.0))
    {
        throw std::invalid_argument("traffic.rate must be positive");
    }
    if (packetSize == 0)
    {
        throw std::invalid_argument("traffic.packet_size must be positive");
    }
    if (!(start >= 0.0 && start < stop))
    {
        throw std::invalid_argument("traffic.start must be non-negative and before traffic.stop");
    }
    if (stop > horizon)
    {
        throw std::invalid_argument("traffic.stop must not exceed the horizon");
    }
}

std::uint64_t
FlowPacketCount(const Flow& flow)
{
    std::uint64_t n = 0;
    while (FlowTickTime(flow, n) < flow.stop)
    {
        ++n;
    }
    return n;
}

std::vector<Flow>
SampleFlows(std::size_t nodes, const TrafficConfig& cfg, std::uint64_t seed)
{
    if (cfg.flows == 0)
    {
        return {};
    }
    if (nodes < 2)
    {
        throw std::invalid_argument("traffic: at least two nodes are needed for a flow");
    }
    const std::uint64_t pairs = static_cast<std::uint64_t>(nodes) * (nodes - 1);
    if (cfg.flows > pairs)
    {
        throw std::invalid_argument("traffic: " + std::to_string(cfg.flows) + " flows requested but only " +
                                    std::to_string(pairs) + " distinct pairs exist");
    }
    // Partial Fisher-Yates over the pair indices.
    RngStream rng(seed, StreamKind::Traffic, 0);
    std::unordered_map<std::uint64_t, std::uint64_t> swapped;
    auto at = [&](std::uint64_t i) {
        auto it = swapped.find(i);
        return it == swapped.end() ? i : it->second;
    };
    std::vector<Flow> flows;
    flows.reserve(cfg.flows);
    for (std::uint64_t i = 0; i < cfg.flows; ++i)
    {
        const std::uint64_t j = i + rng.UniformInt(pairs - i);
        const std::uint64_t pick = at(j);
        swapped[j] = at(i);
        const auto src = static_cast<NodeId>(pick / (nodes - 1));
        auto dst = static_cast<NodeId>(pick % (nodes - 1));
        if (dst >= src)
        {
            ++dst;
        }
        flows.push_back(Flow{src, dst, cfg.rate, cfg.packetSize, cfg.start, cfg.stop});
    }
    return flows;
}

} // namespace manet
