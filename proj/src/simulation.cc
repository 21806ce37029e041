#include "manet/simulation.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace manet
{

namespace
{

PacketFate
FateOf(aomdv::DropCause cause)
{
    switch (cause)
    {
    case aomdv::DropCause::Queue:
        return PacketFate::DroppedQueue;
    case aomdv::DropCause::NoRoute:
        return PacketFate::DroppedNoRoute;
    case aomdv::DropCause::Loss:
        return PacketFate::DroppedLoss;
    }
    return PacketFate::DroppedNoRoute;
}

constexpr std::size_t kMaxSamples = 20;

} // namespace

Simulation::Simulation(const ScenarioConfig& cfg, SimulationOptions opts)
    : m_cfg(cfg),
      m_opts(std::move(opts))
{
    ValidateOrThrow(m_cfg);
    if (m_opts.trace)
    {
        if (m_opts.trace->NodeCount() != m_cfg.nodes || m_opts.trace->Horizon() < m_cfg.horizon)
        {
            throw ConfigError({"supplied trace does not match scenario.nodes or does not cover scenario.horizon"});
        }
        m_trace = std::make_unique<MobilityTrace>(std::move(*m_opts.trace));
        m_opts.trace.reset();
    }
    else
    {
        m_trace = std::make_unique<MobilityTrace>(
            GenerateTrace(m_cfg.model, m_cfg.nodes, m_cfg.area, m_cfg.horizon, m_cfg.mobility, m_cfg.seed));
    }
    if (m_opts.flows)
    {
        m_flows = std::move(*m_opts.flows);
        m_opts.flows.reset();
        for (const Flow& f : m_flows)
        {
            if (f.src >= m_cfg.nodes || f.dst >= m_cfg.nodes || f.src == f.dst || !(f.rate > 0.0) ||
                !(f.start >= 0.0 && f.start < f.stop && f.stop <= m_cfg.horizon) || f.packetSize == 0)
            {
                throw ConfigError({"supplied flow set contains an invalid flow"});
            }
        }
    }
    else
    {
        m_flows = SampleFlows(m_cfg.nodes, m_cfg.traffic, m_cfg.seed);
    }

    m_channel = std::make_unique<Channel>(m_kernel, *m_trace, m_cfg.radio, m_cfg.seed);
    m_agents.reserve(m_cfg.nodes);
    aomdv::RoutingEnvironment& env = *this;
    for (NodeId n = 0; n < m_cfg.nodes; ++n)
    {
        m_agents.push_back(std::make_unique<aomdv::RoutingProtocol>(n, m_cfg.aomdv, env));
    }

    Channel::Hooks hooks;
    hooks.receive = [this](NodeId receiver, NodeId sender, const Packet& pkt) {
        if (pkt.IsData())
        {
            m_ledger.RecordHop(std::get<DataHeader>(pkt.body).packetId, receiver);
        }
        m_agents[receiver]->Receive(pkt, sender);
    };
    hooks.transmitFailure = [this](NodeId sender, NodeId nextHop, const Packet& pkt) {
        m_agents[sender]->TransmitFailed(pkt, nextHop);
    };
    hooks.lost = [this](NodeId receiver, NodeId, const Packet& pkt) {
        if (pkt.IsData())
        {
            const DataHeader& hdr = std::get<DataHeader>(pkt.body);
            Log(receiver, "data_lost", hdr.packetId, "");
            m_ledger.Drop(hdr.packetId, PacketFate::DroppedLoss);
        }
    };
    m_channel->SetHooks(std::move(hooks));

    for (auto& agent : m_agents)
    {
        agent->Start();
    }
    for (std::size_t f = 0; f < m_flows.size(); ++f)
    {
        m_kernel.Schedule(m_flows[f].start, EventKind::Tick, [this, f] { Tick(f, 0); });
    }
}

Simulation::~Simulation() = default;

void
Simulation::Tick(std::size_t flow, std::uint64_t index)
{
    const Flow& f = m_flows[flow];
    const Time now = m_kernel.Now();
    DataHeader hdr;
    hdr.packetId = m_ledger.Originate(flow, f.src, f.dst, now);
    hdr.src = f.src;
    hdr.dst = f.dst;
    Packet pkt;
    pkt.uid = NextUid();
    pkt.sizeBytes = f.packetSize;
    pkt.body = hdr;
    m_agents[f.src]->SendData(std::move(pkt));

    const Time next = FlowTickTime(f, index + 1);
    if (next < f.stop && next <= m_cfg.horizon)
    {
        m_kernel.Schedule(next, EventKind::Tick, [this, flow, index] { Tick(flow, index + 1); });
    }
}

void
Simulation::RunUntil(Time t)
{
    if (t > m_cfg.horizon)
    {
        throw std::invalid_argument("RunUntil beyond the scenario horizon");
    }
    m_kernel.RunUntil(t);
}

SimulationResult
Simulation::Run()
{
    RunUntil(m_cfg.horizon);
    return Summarize();
}

SimulationResult
Simulation::Summarize() const
{
    SimulationResult r;
    r.routing = TotalRoutingStats();
    r.metrics = m_ledger.Finalize(r.routing.controlSent);
    r.invariants = m_invariants;
    for (const PacketRecord& rec : m_ledger.Records())
    {
        std::set<NodeId> seen(rec.hopTrace.begin(), rec.hopTrace.end());
        if (seen.size() != rec.hopTrace.size())
        {
            ++r.invariants.packetsWithRepeatedNode;
            if (r.invariants.samples.size() < kMaxSamples)
            {
                r.invariants.samples.push_back("packet " + std::to_string(rec.packetId) + " revisited a node");
            }
        }
    }
    r.eventsProcessed = m_kernel.EventsProcessed();
    r.traceDigest = m_kernel.TraceDigest();
    r.maxQueueOccupancy = m_channel->MaxQueueOccupancy();
    return r;
}

aomdv::RoutingStats
Simulation::TotalRoutingStats() const
{
    aomdv::RoutingStats t;
    for (const auto& a : m_agents)
    {
        const aomdv::RoutingStats& s = a->Stats();
        t.controlSent += s.controlSent;
        t.controlDropped += s.controlDropped;
        t.rreqOriginated += s.rreqOriginated;
        t.rreqForwarded += s.rreqForwarded;
        t.rrepFromDest += s.rrepFromDest;
        t.rrepFromIntermediate += s.rrepFromIntermediate;
        t.rrepForwarded += s.rrepForwarded;
        t.rrepDiscarded += s.rrepDiscarded;
        t.rerrSent += s.rerrSent;
        t.discoveriesStarted += s.discoveriesStarted;
        t.discoveriesFailed += s.discoveriesFailed;
        t.linkBreaks += s.linkBreaks;
    }
    return t;
}

std::optional<std::uint32_t>
Simulation::FirstRouteHops(NodeId src, NodeId dst) const
{
    auto it = m_firstRouteHops.find({src, dst});
    if (it == m_firstRouteHops.end())
    {
        return std::nullopt;
    }
    return it->second;
}

EventHandle
Simulation::ScheduleTimer(Time delay, std::function<void()> fn)
{
    return m_kernel.ScheduleIn(delay, EventKind::Timer, std::move(fn));
}

bool
Simulation::Unicast(NodeId from, NodeId to, const Packet& pkt)
{
    return m_channel->Unicast(from, to, pkt) == Channel::SendStatus::Queued;
}

bool
Simulation::Broadcast(NodeId from, const Packet& pkt)
{
    return m_channel->Broadcast(from, pkt) == Channel::SendStatus::Queued;
}

void
Simulation::Delivered(NodeId, const DataHeader& hdr)
{
    m_ledger.Deliver(hdr.packetId, m_kernel.Now());
}

void
Simulation::Dropped(NodeId, const DataHeader& hdr, aomdv::DropCause cause)
{
    m_ledger.Drop(hdr.packetId, FateOf(cause));
}

void
Simulation::Violation(std::uint64_t& counter, const std::string& what)
{
    ++counter;
    if (m_invariants.samples.size() < kMaxSamples)
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "t=%.6f ", m_kernel.Now());
        m_invariants.samples.push_back(buf + what);
    }
}

void
Simulation::RouteChanged(NodeId at, const aomdv::RouteEntry& entry, aomdv::RouteChange change)
{
    if (entry.HasPath() && !m_firstRouteHops.contains({at, entry.dest}))
    {
        m_firstRouteHops[{at, entry.dest}] = entry.Primary()->hopCount;
    }
    if (m_opts.eventLog)
    {
        const char* what = change == aomdv::RouteChange::Replaced ? "replaced"
                           : change == aomdv::RouteChange::Added  ? "added"
                                                                  : "pruned";
        std::string paths;
        for (const aomdv::PathEntry& p : entry.paths)
        {
            paths += (paths.empty() ? "" : ",") + std::to_string(p.nextHop) + ":" + std::to_string(p.hopCount);
        }
        Log(at, "route_change", 0,
            "dst=" + std::to_string(entry.dest) + " seq=" + std::to_string(entry.seqNum) + " adv=" +
                (entry.advertisedHopCount ? std::to_string(*entry.advertisedHopCount) : std::string("none")) +
                " paths=" + std::to_string(entry.paths.size()) + " " + what + (paths.empty() ? "" : " via=" + paths));
    }
    if (!m_opts.checkInvariants)
    {
        return;
    }
    ++m_invariants.routeSnapshots;
    if (!aomdv::PathsLinkDisjoint(entry))
    {
        Violation(m_invariants.disjointnessViolations,
                  "node " + std::to_string(at) + " holds non-disjoint paths to " + std::to_string(entry.dest));
    }
    for (const aomdv::PathEntry& p : entry.paths)
    {
        if (!entry.advertisedHopCount || p.hopCount > *entry.advertisedHopCount || p.hopCount < 1)
        {
            Violation(m_invariants.hopBoundViolations,
                      "node " + std::to_string(at) + " path to " + std::to_string(entry.dest) +
                          " exceeds the advertised hop count");
        }
    }
}

void
Simulation::DataForwarding(NodeId at, const DataHeader& hdr, const aomdv::RouteEntry& route)
{
    if (!m_opts.checkInvariants || hdr.lastForwarder == kNoNode || hdr.lastForwarder == at)
    {
        return;
    }
    ++m_invariants.forwardingChecks;
    const std::uint32_t adv = route.advertisedHopCount.value_or(0);
    const bool fresher = route.seqNum > hdr.lastSeq;
    const bool shorter = route.seqNum == hdr.lastSeq && adv < hdr.lastAdvertised;
    if (!fresher && !shorter)
    {
        Violation(m_invariants.loopRuleViolations,
                  "packet " + std::to_string(hdr.packetId) + " at node " + std::to_string(at) + " (seq " +
                      std::to_string(route.seqNum) + ", adv " + std::to_string(adv) + ") after node " +
                      std::to_string(hdr.lastForwarder) + " (seq " + std::to_string(hdr.lastSeq) + ", adv " +
                      std::to_string(hdr.lastAdvertised) + ")");
    }
}

void
Simulation::Log(NodeId at, const char* kind, std::uint64_t uid, const std::string& details)
{
    if (!m_opts.eventLog)
    {
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f %u ", m_kernel.Now(), at);
    std::string line = buf;
    line += kind;
    line += ' ';
    line += std::to_string(uid);
    if (!details.empty())
    {
        line += ' ';
        line += details;
    }
    m_log.push_back(std::move(line));
}

} // namespace manet
