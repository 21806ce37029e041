#ifndef MANET_RADIO_H
#define MANET_RADIO_H

#include "manet/mobility.h"
#include "manet/packet.h"
#include "manet/rng.h"
#include "manet/sim-kernel.h"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <vector>

namespace manet
{

struct RadioConfig
{
    double range = 250.0;          // m
    double bandwidth = 2'000'000;  // bit/s
    std::size_t queueCapacity = 50;
    Time jitterMax = 0.001;
    double lossProb = 0.0;

    /// Throws std::invalid_argument on a bad field.
    void Validate() const;
};

struct LinkVerdict
{
    bool reachable;
    double distance;
};

/// Unit-disk rule, boundary inclusive.
LinkVerdict CheckLink(Vec2 a, Vec2 b, double range);

std::vector<NodeId> Neighbors(const MobilityTrace& trace, Time t, NodeId node,
                              const RadioConfig& cfg);

Time SerializationDelay(std::size_t bytes, double bandwidth);

bool SampleLoss(RngStream& rng, double lossProb);

/**
 * Shared wireless medium: a FIFO drop-tail interface queue per node drained at
 * the link bandwidth. Reachability is judged when a packet reaches the head of
 * the queue; an unreachable unicast next hop is reported back to the sender
 * instead of being delivered.
 */
class Channel
{
  public:
    struct Hooks
    {
        std::function<void(NodeId receiver, NodeId sender, const Packet&)> receive;
        std::function<void(NodeId sender, NodeId nextHop, const Packet&)> transmitFailure;
        std::function<void(NodeId receiver, NodeId sender, const Packet&)> lost;
    };

    enum class SendStatus
    {
        Queued,
        QueueOverflow,
    };

    Channel(Kernel& kernel, const MobilityTrace& trace, RadioConfig cfg, std::uint64_t seed);

    void SetHooks(Hooks hooks) { m_hooks = std::move(hooks); }

    SendStatus Unicast(NodeId src, NodeId dst, Packet pkt);
    SendStatus Broadcast(NodeId src, Packet pkt);

    std::size_t QueueLength(NodeId node) const { return m_nodes.at(node).queue.size(); }
    std::size_t MaxQueueOccupancy() const { return m_maxOccupancy; }
    std::uint64_t QueueDrops() const { return m_queueDrops; }
    const RadioConfig& Config() const { return m_cfg; }

  private:
    struct Pending
    {
        Packet pkt;
        NodeId dst; // kNoNode for broadcast
    };

    struct Interface
    {
        std::deque<Pending> queue;
        bool busy = false;
        RngStream jitter;
        RngStream loss;
    };

    SendStatus Enqueue(NodeId src, Pending p);
    void Dequeue(NodeId src);
    void ScheduleDelivery(NodeId src, NodeId receiver, Time at, const Packet& pkt);

    Kernel& m_kernel;
    const MobilityTrace& m_trace;
    RadioConfig m_cfg;
    Hooks m_hooks;
    std::vector<Interface> m_nodes;
    std::size_t m_maxOccupancy = 0;
    std::uint64_t m_queueDrops = 0;
};

} // namespace manet

#endif // MANET_RADIO_H
