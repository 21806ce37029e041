#include "manet/radio.h"

#include <algorithm>
#include <stdexcept>

namespace manet
{

void
RadioConfig::Validate() const
{
    if (!(range > 0.0))
    {
        throw std::invalid_argument("radio.range must be positive");
    }
    if (!(bandwidth > 0.0))
    {
        throw std::invalid_argument("radio.bandwidth must be positive");
    }
    if (queueCapacity < 1)
    {
        throw std::invalid_argument("radio.queue_capacity must be at least 1");
    }
    if (!(jitterMax >= 0.0))
    {
        throw std::invalid_argument("radio.jitter_max must be non-negative");
    }
    if (!(lossProb >= 0.0 && lossProb <= 1.0))
    {
        throw std::invalid_argument("radio.loss_prob must lie in [0, 1]");
    }
}

LinkVerdict
CheckLink(Vec2 a, Vec2 b, double range)
{
    const double d = Distance(a, b);
    return {d <= range, d};
}

std::vector<NodeId>
Neighbors(const MobilityTrace& trace, Time t, NodeId node, const RadioConfig& cfg)
{
    std::vector<NodeId> out;
    const Vec2 self = trace.PositionAt(node, t);
    for (NodeId other = 0; other < trace.NodeCount(); ++other)
    {
        if (other != node && CheckLink(self, trace.PositionAt(other, t), cfg.range).reachable)
        {
            out.push_back(other);
        }
    }
    return out;
}

Time
SerializationDelay(std::size_t bytes, double bandwidth)
{
    return static_cast<double>(bytes) * 8.0 / bandwidth;
}

bool
SampleLoss(RngStream& rng, double lossProb)
{
    return rng.Bernoulli(lossProb);
}

Channel::Channel(Kernel& kernel, const MobilityTrace& trace, RadioConfig cfg, std::uint64_t seed)
    : m_kernel(kernel),
      m_trace(trace),
      m_cfg(cfg)
{
    m_cfg.Validate();
    m_nodes.reserve(trace.NodeCount());
    for (std::size_t n = 0; n < trace.NodeCount(); ++n)
    {
        m_nodes.push_back(Interface{{}, false, RngStream(seed, StreamKind::MacJitter, n),
                                    RngStream(seed, StreamKind::Loss, n)});
    }
}

Channel::SendStatus
Channel::Unicast(NodeId src, NodeId dst, Packet pkt)
{
    if (dst >= m_nodes.size() || dst == src)
    {
        throw std::invalid_argument("Unicast: bad next hop");
    }
    return Enqueue(src, Pending{std::move(pkt), dst});
}

Channel::SendStatus
Channel::Broadcast(NodeId src, Packet pkt)
{
    return Enqueue(src, Pending{std::move(pkt), kNoNode});
}

Channel::SendStatus
Channel::Enqueue(NodeId src, Pending p)
{
    if (p.pkt.sizeBytes == 0)
    {
        throw std::invalid_argument("Channel: packet size must be positive");
    }
    Interface& iface = m_nodes.at(src);
    if (iface.queue.size() >= m_cfg.queueCapacity)
    {
        ++m_queueDrops;
        return SendStatus::QueueOverflow;
    }
    iface.queue.push_back(std::move(p));
    m_maxOccupancy = std::max(m_maxOccupancy, iface.queue.size());
    if (!iface.busy)
    {
        iface.busy = true;
        m_kernel.Schedule(m_kernel.Now(), EventKind::Other, [this, src] { Dequeue(src); });
    }
    return SendStatus::Queued;
}

void
Channel::Dequeue(NodeId src)
{
    Interface& iface = m_nodes[src];
    if (iface.queue.empty())
    {
        iface.busy = false;
        return;
    }
    Pending p = std::move(iface.queue.front());
    iface.queue.pop_front();
    const Time now = m_kernel.Now();
    const Vec2 here = m_trace.PositionAt(src, now);

    if (p.dst != kNoNode)
    {
        if (!CheckLink(here, m_trace.PositionAt(p.dst, now), m_cfg.range).reachable)
        {
            m_kernel.Schedule(now, EventKind::Other, [this, src] { Dequeue(src); });
            if (m_hooks.transmitFailure)
            {
                m_hooks.transmitFailure(src, p.dst, p.pkt);
            }
            return;
        }
    }

    const Time done = now + SerializationDelay(p.pkt.sizeBytes, m_cfg.bandwidth);
    if (p.dst != kNoNode)
    {
        ScheduleDelivery(src, p.dst, done, p.pkt);
    }
    else
    {
        for (NodeId other = 0; other < m_nodes.size(); ++other)
        {
            if (other != src && CheckLink(here, m_trace.PositionAt(other, now), m_cfg.range).reachable)
            {
                ScheduleDelivery(src, other, done, p.pkt);
            }
        }
    }
    m_kernel.Schedule(done, EventKind::Other, [this, src] { Dequeue(src); });
}

void
Channel::ScheduleDelivery(NodeId src, NodeId receiver, Time at, const Packet& pkt)
{
    Interface& iface = m_nodes[src];
    const Time jitter = m_cfg.jitterMax > 0.0 ? iface.jitter.Uniform(0.0, m_cfg.jitterMax) : 0.0;
    const bool lost = SampleLoss(iface.loss, m_cfg.lossProb);
    m_kernel.Schedule(at + jitter, EventKind::Delivery, [this, src, receiver, lost, pkt] {
        if (lost)
        {
            if (m_hooks.lost)
            {
                m_hooks.lost(receiver, src, pkt);
            }
        }
        else if (m_hooks.receive)
        {
            m_hooks.receive(receiver, src, pkt);
        }
    });
}

} // namespace manet
