#ifndef MANET_AOMDV_ROUTING_H
#define MANET_AOMDV_ROUTING_H

#include "manet/aomdv-rtable.h"
#include "manet/packet.h"
#include "manet/sim-kernel.h"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace manet
{
namespace aomdv
{

struct AomdvConfig
{
    std::size_t kReplies = 3;
    std::size_t maxPaths = 3;
    Time activeRouteLifetime = 10.0;
    unsigned rreqRetries = 3;
    Time pathDiscoveryWindow = 30.0;
    std::uint32_t ttl = 30;
    // First RREQ wait; doubles on every retry.
    Time netTraversalTime = 2.8;
    bool intermediateReplies = true;
    Time purgeInterval = 0.5;

    void Validate() const;
};

enum class RouteChange
{
    Replaced,
    Added,
    Pruned,
};

enum class DropCause
{
    Queue,
    NoRoute,
    Loss,
};

/**
 * What a node's routing agent needs from the rest of the simulator. The
 * observation hooks have empty defaults.
 */
class RoutingEnvironment
{
  public:
    virtual ~RoutingEnvironment() = default;

    virtual Time Now() const = 0;
    virtual EventHandle ScheduleTimer(Time delay, std::function<void()> fn) = 0;
    virtual bool CancelTimer(EventHandle handle) = 0;
    /// False when the interface queue overflowed.
    virtual bool Unicast(NodeId from, NodeId to, const Packet& pkt) = 0;
    virtual bool Broadcast(NodeId from, const Packet& pkt) = 0;
    virtual std::uint64_t NextUid() = 0;
    virtual void Delivered(NodeId at, const DataHeader& hdr) = 0;
    virtual void Dropped(NodeId at, const DataHeader& hdr, DropCause cause) = 0;

    virtual void RouteChanged(NodeId /*at*/, const RouteEntry& /*entry*/, RouteChange /*change*/) {}
    virtual void DataForwarding(NodeId /*at*/, const DataHeader& /*hdr*/, const RouteEntry& /*route*/) {}
    virtual bool LogEnabled() const { return false; }
    virtual void Log(NodeId /*at*/, const char* /*kind*/, std::uint64_t /*uid*/, const std::string& /*details*/) {}
};

/// Duplicate-RREQ bookkeeping keyed by (source, rreq id).
class RreqSeenCache
{
  public:
    struct Record
    {
        Time expiresAt = 0.0;
        // (previous hop, first hop) of every copy processed so far.
        std::set<std::pair<NodeId, NodeId>> copies;
        std::size_t replies = 0;
        std::set<NodeId> repliedNeighbors;
        std::set<NodeId> repliedFirstHops;
        SeqNum replySeq = 0;
    };

    /// Returns the record, creating it (and setting created) when absent.
    Record& Touch(NodeId source, std::uint32_t rreqId, Time expiresAt, bool& created);
    const Record* Find(NodeId source, std::uint32_t rreqId) const;
    void Purge(Time now);
    std::size_t Size() const { return m_records.size(); }

  private:
    std::map<std::pair<NodeId, std::uint32_t>, Record> m_records;
};

struct RoutingStats
{
    std::uint64_t controlSent = 0;
    std::uint64_t controlDropped = 0;
    std::uint64_t rreqOriginated = 0;
    std::uint64_t rreqForwarded = 0;
    std::uint64_t rrepFromDest = 0;
    std::uint64_t rrepFromIntermediate = 0;
    std::uint64_t rrepForwarded = 0;
    std::uint64_t rrepDiscarded = 0;
    std::uint64_t rerrSent = 0;
    std::uint64_t discoveriesStarted = 0;
    std::uint64_t discoveriesFailed = 0;
    std::uint64_t linkBreaks = 0;
};

/**
 * AOMDV agent of one node: on-demand discovery of multiple link-disjoint,
 * loop-free paths, failover to alternates on link-layer failure, and RERR
 * propagation once a destination loses its last path.
 */
class RoutingProtocol
{
  public:
    RoutingProtocol(NodeId self, const AomdvConfig& cfg, RoutingEnvironment& env);
    RoutingProtocol(const RoutingProtocol&) = delete;
    RoutingProtocol& operator=(const RoutingProtocol&) = delete;

    /// Arms the periodic route purge.
    void Start();

    /// Originates a data packet (body must be DataHeader with src == self).
    void SendData(Packet pkt);
    void Receive(const Packet& pkt, NodeId from);
    /// Link-layer feedback: `pkt` could not reach `nextHop`.
    void TransmitFailed(const Packet& pkt, NodeId nextHop);
    void ExpireRoutes();

    NodeId Self() const { return m_self; }
    const RouteTable& Table() const { return m_table; }
    const RoutingStats& Stats() const { return m_stats; }
    const RreqSeenCache& SeenCache() const { return m_seen; }
    SeqNum OwnSeq() const { return m_seq; }
    bool DiscoveryPending(NodeId dest) const { return m_discoveries.contains(dest); }
    std::size_t Buffered(NodeId dest) const;
    std::size_t BufferedTotal() const;

  private:
    struct Discovery
    {
        unsigned attempts = 0;
        EventHandle timer;
    };

    bool ForwardData(Packet& pkt);
    void StartDiscovery(NodeId dest);
    void SendRreq(NodeId dest);
    void OnDiscoveryTimeout(NodeId dest);
    void CompleteDiscovery(NodeId dest);

    void HandleData(Packet pkt);
    void HandleRreq(const RreqMessage& msg, NodeId from);
    void HandleRrep(const RrepMessage& msg, NodeId from);
    void HandleRerr(const RerrMessage& msg, NodeId from);

    void SendRerr(std::vector<std::pair<NodeId, SeqNum>> unreachable);
    void Invalidate(RouteEntry& entry, SeqNum atLeast);
    bool SendControl(const Packet& pkt, NodeId to);
    Packet MakeControl(std::size_t bytes);
    void Log(const char* kind, std::uint64_t uid, const std::string& details);

    NodeId m_self;
    AomdvConfig m_cfg;
    RoutingEnvironment& m_env;
    RouteTable m_table;
    RreqSeenCache m_seen;
    SeqNum m_seq = 0;
    std::uint32_t m_rreqId = 0;
    std::map<NodeId, Discovery> m_discoveries;
    std::map<NodeId, std::deque<Packet>> m_buffer;
    // Reverse next hops already used to relay an RREP, per (source, dest, dest seq).
    std::map<std::tuple<NodeId, NodeId, SeqNum>, std::pair<Time, std::set<NodeId>>> m_rrepRelayed;
    RoutingStats m_stats;
};

} // namespace aomdv
} // namespace manet

#endif // MANET_AOMDV_ROUTING_H
