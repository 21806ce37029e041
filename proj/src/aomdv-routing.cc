#include "manet/aomdv-routing.h"

#include <algorithm>
#include <stdexcept>

namespace manet
{
namespace aomdv
{

void
AomdvConfig::Validate() const
{
    if (kReplies < 1)
    {
        throw std::invalid_argument("aomdv.k_replies must be at least 1");
    }
    if (maxPaths < 1)
    {
        throw std::invalid_argument("aomdv.max_paths must be at least 1");
    }
    if (!(activeRouteLifetime > 0.0))
    {
        throw std::invalid_argument("aomdv.active_route_lifetime must be positive");
    }
    if (!(pathDiscoveryWindow > 0.0))
    {
        throw std::invalid_argument("aomdv.path_discovery_window must be positive");
    }
    if (ttl < 1)
    {
        throw std::invalid_argument("aomdv.ttl must be at least 1");
    }
    if (!(netTraversalTime > 0.0))
    {
        throw std::invalid_argument("aomdv.net_traversal_time must be positive");
    }
    if (!(purgeInterval > 0.0))
    {
        throw std::invalid_argument("aomdv.purge_interval must be positive");
    }
}

namespace
{

RouteChange
ToChange(UpdateVerdict v)
{
    return v == UpdateVerdict::Replaced ? RouteChange::Replaced : RouteChange::Added;
}

} // namespace

RreqSeenCache::Record&
RreqSeenCache::Touch(NodeId source, std::uint32_t rreqId, Time expiresAt, bool& created)
{
    auto [it, inserted] = m_records.try_emplace({source, rreqId});
    created = inserted;
    if (inserted)
    {
        it->second.expiresAt = expiresAt;
    }
    return it->second;
}

const RreqSeenCache::Record*
RreqSeenCache::Find(NodeId source, std::uint32_t rreqId) const
{
    auto it = m_records.find({source, rreqId});
    return it == m_records.end() ? nullptr : &it->second;
}

void
RreqSeenCache::Purge(Time now)
{
    std::erase_if(m_records, [now](const auto& kv) { return kv.second.expiresAt <= now; });
}

RoutingProtocol::RoutingProtocol(NodeId self, const AomdvConfig& cfg, RoutingEnvironment& env)
    : m_self(self),
      m_cfg(cfg),
      m_env(env)
{
    m_cfg.Validate();
}

void
RoutingProtocol::Start()
{
    m_env.ScheduleTimer(m_cfg.purgeInterval, [this] {
        ExpireRoutes();
        Start();
    });
}

std::size_t
RoutingProtocol::Buffered(NodeId dest) const
{
    auto it = m_buffer.find(dest);
    return it == m_buffer.end() ? 0 : it->second.size();
}

std::size_t
RoutingProtocol::BufferedTotal() const
{
    std::size_t n = 0;
    for (const auto& [dest, q] : m_buffer)
    {
        n += q.size();
    }
    return n;
}

void
RoutingProtocol::Log(const char* kind, std::uint64_t uid, const std::string& details)
{
    if (m_env.LogEnabled())
    {
        m_env.Log(m_self, kind, uid, details);
    }
}

Packet
RoutingProtocol::MakeControl(std::size_t bytes)
{
    Packet pkt;
    pkt.uid = m_env.NextUid();
    pkt.sizeBytes = bytes;
    return pkt;
}

bool
RoutingProtocol::SendControl(const Packet& pkt, NodeId to)
{
    const bool ok = to == kNoNode ? m_env.Broadcast(m_self, pkt) : m_env.Unicast(m_self, to, pkt);
    if (ok)
    {
        ++m_stats.controlSent;
    }
    else
    {
        ++m_stats.controlDropped;
    }
    return ok;
}

// ---------------------------------------------------------------------------
// Data path

void
RoutingProtocol::SendData(Packet pkt)
{
    const DataHeader& hdr = std::get<DataHeader>(pkt.body);
    Log("data_send", hdr.packetId, "dst=" + std::to_string(hdr.dst));
    if (ForwardData(pkt))
    {
        return;
    }
    const NodeId dst = hdr.dst;
    m_buffer[dst].push_back(std::move(pkt));
    if (!m_discoveries.contains(dst))
    {
        StartDiscovery(dst);
    }
}

bool
RoutingProtocol::ForwardData(Packet& pkt)
{
    DataHeader& hdr = std::get<DataHeader>(pkt.body);
    RouteEntry* route = m_table.Find(hdr.dst);
    if (route == nullptr)
    {
        return false;
    }
    const Time now = m_env.Now();
    route->PruneExpired(now);
    if (!route->HasPath())
    {
        return false;
    }
    for (PathEntry& p : route->paths)
    {
        p.expiresAt = std::max(p.expiresAt, now + m_cfg.activeRouteLifetime);
    }
    m_env.DataForwarding(m_self, hdr, *route);
    const NodeId nextHop = route->Primary()->nextHop;
    if (hdr.src == m_self)
    {
        hdr.originSeq = route->seqNum;
    }
    hdr.lastForwarder = m_self;
    hdr.lastSeq = route->seqNum;
    hdr.lastAdvertised = *route->advertisedHopCount;
    Log("data_fwd", hdr.packetId, "next=" + std::to_string(nextHop));
    if (!m_env.Unicast(m_self, nextHop, pkt))
    {
        Log("data_drop", hdr.packetId, "cause=queue");
        m_env.Dropped(m_self, hdr, DropCause::Queue);
    }
    return true;
}

void
RoutingProtocol::HandleData(Packet pkt)
{
    const DataHeader& hdr = std::get<DataHeader>(pkt.body);
    if (hdr.dst == m_self)
    {
        Log("data_recv", hdr.packetId, "src=" + std::to_string(hdr.src));
        m_env.Delivered(m_self, hdr);
        return;
    }
    if (ForwardData(pkt))
    {
        return;
    }
    Log("data_drop", hdr.packetId, "cause=noroute");
    m_env.Dropped(m_self, hdr, DropCause::NoRoute);
    const RouteEntry* known = m_table.Find(hdr.dst);
    SendRerr({{hdr.dst, known ? known->seqNum : hdr.lastSeq}});
}

// ---------------------------------------------------------------------------
// Discovery

void
RoutingProtocol::StartDiscovery(NodeId dest)
{
    ++m_stats.discoveriesStarted;
    m_discoveries[dest] = Discovery{};
    SendRreq(dest);
}

void
RoutingProtocol::SendRreq(NodeId dest)
{
    Discovery& d = m_discoveries.at(dest);
    ++m_seq;
    RreqMessage msg;
    msg.rreqId = ++m_rreqId;
    msg.source = m_self;
    msg.dest = dest;
    msg.sourceSeq = m_seq;
    if (const RouteEntry* e = m_table.Find(dest))
    {
        msg.destSeqKnown = e->seqNum;
    }
    msg.hopCount = 0;
    msg.ttl = m_cfg.ttl;

    Packet pkt = MakeControl(kRreqBytes);
    pkt.body = msg;
    ++m_stats.rreqOriginated;
    Log("rreq_send", pkt.uid,
        "dst=" + std::to_string(dest) + " id=" + std::to_string(msg.rreqId) + " ttl=" + std::to_string(msg.ttl) +
            " attempt=" + std::to_string(d.attempts));
    SendControl(pkt, kNoNode);

    const Time wait = m_cfg.netTraversalTime * static_cast<double>(1u << std::min(d.attempts, 20u));
    d.timer = m_env.ScheduleTimer(wait, [this, dest] { OnDiscoveryTimeout(dest); });
}

void
RoutingProtocol::OnDiscoveryTimeout(NodeId dest)
{
    auto it = m_discoveries.find(dest);
    if (it == m_discoveries.end())
    {
        return;
    }
    if (RouteEntry* e = m_table.Find(dest))
    {
        e->PruneExpired(m_env.Now());
        if (e->HasPath())
        {
            CompleteDiscovery(dest);
            return;
        }
    }
    if (it->second.attempts < m_cfg.rreqRetries)
    {
        ++it->second.attempts;
        SendRreq(dest);
        return;
    }
    m_discoveries.erase(it);
    ++m_stats.discoveriesFailed;
    Log("discovery_fail", 0, "dst=" + std::to_string(dest));
    auto buf = m_buffer.find(dest);
    if (buf == m_buffer.end())
    {
        return;
    }
    std::deque<Packet> dropped = std::move(buf->second);
    m_buffer.erase(buf);
    for (const Packet& pkt : dropped)
    {
        const DataHeader& hdr = std::get<DataHeader>(pkt.body);
        Log("data_drop", hdr.packetId, "cause=noroute");
        m_env.Dropped(m_self, hdr, DropCause::NoRoute);
    }
}

void
RoutingProtocol::CompleteDiscovery(NodeId dest)
{
    auto it = m_discoveries.find(dest);
    if (it != m_discoveries.end())
    {
        m_env.CancelTimer(it->second.timer);
        m_discoveries.erase(it);
    }
    auto buf = m_buffer.find(dest);
    if (buf == m_buffer.end())
    {
        return;
    }
    std::deque<Packet> pending = std::move(buf->second);
    m_buffer.erase(buf);
    for (Packet& pkt : pending)
    {
        if (!ForwardData(pkt))
        {
            const DataHeader& hdr = std::get<DataHeader>(pkt.body);
            Log("data_drop", hdr.packetId, "cause=noroute");
            m_env.Dropped(m_self, hdr, DropCause::NoRoute);
        }
    }
}

// ---------------------------------------------------------------------------
// Control messages

void
RoutingProtocol::Receive(const Packet& pkt, NodeId from)
{
    switch (pkt.Kind())
    {
    case PacketKind::Data:
        HandleData(pkt);
        break;
    case PacketKind::Rreq:
        HandleRreq(std::get<RreqMessage>(pkt.body), from);
        break;
    case PacketKind::Rrep:
        HandleRrep(std::get<RrepMessage>(pkt.body), from);
        break;
    case PacketKind::Rerr:
        HandleRerr(std::get<RerrMessage>(pkt.body), from);
        break;
    }
}

void
RoutingProtocol::HandleRreq(const RreqMessage& msg, NodeId from)
{
    if (msg.source == m_self)
    {
        return;
    }
    const Time now = m_env.Now();
    bool firstCopy = false;
    RreqSeenCache::Record& seen =
        m_seen.Touch(msg.source, msg.rreqId, now + m_cfg.pathDiscoveryWindow, firstCopy);
    const NodeId firstHop = msg.hopCount == 0 ? m_self : msg.firstHop;
    if (!seen.copies.insert({from, firstHop}).second)
    {
        return; // same (neighbour, first hop) copy already examined
    }

    // Reverse path toward the source.
    RouteEntry& reverse = m_table.FindOrCreate(msg.source);
    reverse.PruneExpired(now);
    const UpdateVerdict verdict =
        RouteUpdate(reverse, Advertisement{msg.sourceSeq, msg.hopCount, from, firstHop},
                    now + m_cfg.activeRouteLifetime, m_cfg.maxPaths);
    if (verdict != UpdateVerdict::Rejected)
    {
        m_env.RouteChanged(m_self, reverse, ToChange(verdict));
    }

    if (msg.dest == m_self)
    {
        const bool loopFree = verdict != UpdateVerdict::Rejected ||
                              (reverse.seqNum == msg.sourceSeq && reverse.advertisedHopCount &&
                               msg.hopCount < *reverse.advertisedHopCount);
        if (!loopFree || seen.replies >= m_cfg.kReplies || seen.repliedNeighbors.contains(from) ||
            seen.repliedFirstHops.contains(firstHop))
        {
            return;
        }
        if (seen.replies == 0)
        {
            m_seq = std::max(m_seq, msg.destSeqKnown.value_or(0)) + 1;
            seen.replySeq = m_seq;
        }
        ++seen.replies;
        seen.repliedNeighbors.insert(from);
        seen.repliedFirstHops.insert(firstHop);

        RrepMessage rrep;
        rrep.source = msg.source;
        rrep.dest = m_self;
        rrep.destSeq = seen.replySeq;
        rrep.hopCount = 0;
        rrep.lifetime = m_cfg.activeRouteLifetime;
        Packet pkt = MakeControl(kRrepBytes);
        pkt.body = rrep;
        ++m_stats.rrepFromDest;
        Log("rrep_send", pkt.uid,
            "src=" + std::to_string(msg.source) + " via=" + std::to_string(from) +
                " seq=" + std::to_string(rrep.destSeq));
        SendControl(pkt, from);
        return;
    }

    if (!firstCopy)
    {
        return; // duplicates only contribute alternate reverse paths
    }

    if (m_cfg.intermediateReplies)
    {
        RouteEntry* fwd = m_table.Find(msg.dest);
        if (fwd != nullptr)
        {
            fwd->PruneExpired(now);
        }
        if (fwd != nullptr && fwd->HasPath() &&
            (!msg.destSeqKnown || fwd->seqNum >= *msg.destSeqKnown) &&
            verdict != UpdateVerdict::Rejected)
        {
            RrepMessage rrep;
            rrep.source = msg.source;
            rrep.dest = msg.dest;
            rrep.destSeq = fwd->seqNum;
            rrep.hopCount = *fwd->advertisedHopCount;
            rrep.firstHop = fwd->Primary()->firstHop;
            rrep.lifetime = m_cfg.activeRouteLifetime;
            Packet pkt = MakeControl(kRrepBytes);
            pkt.body = rrep;
            ++m_stats.rrepFromIntermediate;
            Log("rrep_send", pkt.uid,
                "src=" + std::to_string(msg.source) + " dst=" + std::to_string(msg.dest) +
                    " intermediate=1");
            SendControl(pkt, from);
            return;
        }
    }

    if (msg.ttl <= 1)
    {
        return;
    }
    RreqMessage out = msg;
    // Advertise our own distance to the source, never the length of this copy.
    out.hopCount = reverse.seqNum == msg.sourceSeq && reverse.advertisedHopCount ? *reverse.advertisedHopCount
                                                                                   : msg.hopCount + 1;
    out.firstHop = firstHop;
    out.ttl = msg.ttl - 1;
    Packet pkt = MakeControl(kRreqBytes);
    pkt.body = out;
    ++m_stats.rreqForwarded;
    Log("rreq_fwd", pkt.uid,
        "src=" + std::to_string(msg.source) + " id=" + std::to_string(msg.rreqId) +
            " hop=" + std::to_string(out.hopCount));
    SendControl(pkt, kNoNode);
}

void
RoutingProtocol::HandleRrep(const RrepMessage& msg, NodeId from)
{
    if (msg.dest == m_self)
    {
        return;
    }
    const Time now = m_env.Now();
    const NodeId firstHop = msg.hopCount == 0 ? m_self : msg.firstHop;
    RouteEntry& forward = m_table.FindOrCreate(msg.dest);
    forward.PruneExpired(now);
    const UpdateVerdict verdict = RouteUpdate(
        forward, Advertisement{msg.destSeq, msg.hopCount, from, firstHop}, now + msg.lifetime, m_cfg.maxPaths);
    if (verdict == UpdateVerdict::Rejected)
    {
        ++m_stats.rrepDiscarded;
        return;
    }
    m_env.RouteChanged(m_self, forward, ToChange(verdict));

    if (msg.source == m_self)
    {
        Log("route_up", 0,
            "dst=" + std::to_string(msg.dest) + " hops=" + std::to_string(msg.hopCount + 1) +
                " paths=" + std::to_string(forward.paths.size()));
        if (m_discoveries.contains(msg.dest) || m_buffer.contains(msg.dest))
        {
            CompleteDiscovery(msg.dest);
        }
        return;
    }

    RouteEntry* reverse = m_table.Find(msg.source);
    if (reverse != nullptr)
    {
        reverse->PruneExpired(now);
    }
    if (reverse == nullptr || !reverse->HasPath())
    {
        ++m_stats.rrepDiscarded;
        return;
    }
    auto& [expiry, relayed] = m_rrepRelayed[{msg.source, msg.dest, msg.destSeq}];
    expiry = now + m_cfg.pathDiscoveryWindow;
    NodeId via = kNoNode;
    for (const PathEntry& p : reverse->paths)
    {
        if (p.nextHop != from && !relayed.contains(p.nextHop))
        {
            via = p.nextHop;
            break;
        }
    }
    if (via == kNoNode)
    {
        via = reverse->Primary()->nextHop;
        if (via == from)
        {
            ++m_stats.rrepDiscarded;
            return;
        }
    }
    relayed.insert(via);

    RrepMessage out = msg;
    out.hopCount = *forward.advertisedHopCount;
    out.firstHop = firstHop;
    Packet pkt = MakeControl(kRrepBytes);
    pkt.body = out;
    ++m_stats.rrepForwarded;
    Log("rrep_fwd", pkt.uid,
        "src=" + std::to_string(msg.source) + " dst=" + std::to_string(msg.dest) +
            " via=" + std::to_string(via) + " hop=" + std::to_string(out.hopCount));
    SendControl(pkt, via);
}

void
RoutingProtocol::Invalidate(RouteEntry& entry, SeqNum atLeast)
{
    entry.seqNum = std::max(entry.seqNum + 1, atLeast);
    entry.advertisedHopCount.reset();
    entry.paths.clear();
    entry.retainUntil = m_env.Now() + m_cfg.activeRouteLifetime;
}

void
RoutingProtocol::HandleRerr(const RerrMessage& msg, NodeId from)
{
    const Time now = m_env.Now();
    std::vector<std::pair<NodeId, SeqNum>> lost;
    for (const auto& [dest, seq] : msg.unreachable)
    {
        RouteEntry* e = m_table.Find(dest);
        if (e == nullptr || dest == m_self)
        {
            continue;
        }
        e->PruneExpired(now);
        if (e->RemoveVia(from))
        {
            m_env.RouteChanged(m_self, *e, RouteChange::Pruned);
            if (!e->HasPath())
            {
                Invalidate(*e, seq);
                lost.emplace_back(dest, e->seqNum);
            }
        }
    }
    if (!lost.empty())
    {
        SendRerr(std::move(lost));
    }
}

void
RoutingProtocol::SendRerr(std::vector<std::pair<NodeId, SeqNum>> unreachable)
{
    Packet pkt = MakeControl(kRerrBaseBytes + kRerrPerDestBytes * unreachable.size());
    std::string details;
    if (m_env.LogEnabled())
    {
        for (const auto& [d, s] : unreachable)
        {
            details += (details.empty() ? "lost=" : ",") + std::to_string(d) + ":" + std::to_string(s);
        }
    }
    pkt.body = RerrMessage{std::move(unreachable)};
    ++m_stats.rerrSent;
    Log("rerr_send", pkt.uid, details);
    SendControl(pkt, kNoNode);
}

void
RoutingProtocol::TransmitFailed(const Packet& pkt, NodeId nextHop)
{
    ++m_stats.linkBreaks;
    Log("link_break", pkt.uid, "next=" + std::to_string(nextHop));
    std::vector<std::pair<NodeId, SeqNum>> lost;
    for (auto& [dest, entry] : m_table.Entries())
    {
        if (entry.RemoveVia(nextHop))
        {
            m_env.RouteChanged(m_self, entry, RouteChange::Pruned);
            if (!entry.HasPath())
            {
                Invalidate(entry, 0);
                lost.emplace_back(dest, entry.seqNum);
            }
        }
    }
    if (!lost.empty())
    {
        SendRerr(std::move(lost));
    }

    if (pkt.IsData())
    {
        Packet retry = pkt;
        if (!ForwardData(retry))
        {
            const DataHeader& hdr = std::get<DataHeader>(pkt.body);
            Log("data_drop", hdr.packetId, "cause=noroute");
            m_env.Dropped(m_self, hdr, DropCause::NoRoute);
        }
    }
    else
    {
        ++m_stats.controlDropped;
    }
}

void
RoutingProtocol::ExpireRoutes()
{
    const Time now = m_env.Now();
    m_table.Purge(now);
    m_seen.Purge(now);
    std::erase_if(m_rrepRelayed, [now](const auto& kv) { return kv.second.first <= now; });
}

} // namespace aomdv
} // namespace manet
