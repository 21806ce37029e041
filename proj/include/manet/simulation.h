#ifndef MANET_SIMULATION_H
#define MANET_SIMULATION_H

#include "manet/aomdv-routing.h"
#include "manet/metrics.h"
#include "manet/mobility.h"
#include "manet/radio.h"
#include "manet/scenario-config.h"
#include "manet/sim-kernel.h"
#include "manet/traffic.h"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace manet
{

struct SimulationOptions
{
    // Replace the generated mobility trace (must match cfg.nodes and cover the horizon).
    std::optional<MobilityTrace> trace;
    // Replace the sampled flow set.
    std::optional<std::vector<Flow>> flows;
    bool eventLog = false;
    bool checkInvariants = true;
};

/// Counts of protocol-invariant violations observed during a run.
struct InvariantReport
{
    std::uint64_t packetsWithRepeatedNode = 0;
    // A hop whose (seq, advertised hop count) is not fresher-or-shorter than the previous hop's.
    std::uint64_t loopRuleViolations = 0;
    std::uint64_t disjointnessViolations = 0;
    // A stored path longer than the entry's advertised hop count.
    std::uint64_t hopBoundViolations = 0;
    std::uint64_t routeSnapshots = 0;
    std::uint64_t forwardingChecks = 0;
    std::vector<std::string> samples;

    bool Clean() const
    {
        return packetsWithRepeatedNode == 0 && loopRuleViolations == 0 && disjointnessViolations == 0 &&
               hopBoundViolations == 0;
    }
};

struct SimulationResult
{
    RunMetrics metrics;
    InvariantReport invariants;
    aomdv::RoutingStats routing;
    std::uint64_t eventsProcessed = 0;
    std::uint64_t traceDigest = 0;
    std::size_t maxQueueOccupancy = 0;
};

/**
 * One scenario: mobility trace, shared channel, an AOMDV agent per node and the
 * CBR sources, all driven by a single kernel.
 */
class Simulation : private aomdv::RoutingEnvironment
{
  public:
    /// Throws ConfigError when cfg is invalid.
    explicit Simulation(const ScenarioConfig& cfg, SimulationOptions opts = {});
    ~Simulation() override;
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Advance to t (<= horizon).
    void RunUntil(Time t);
    /// Run to the horizon and summarize.
    SimulationResult Run();
    SimulationResult Summarize() const;

    const ScenarioConfig& Config() const { return m_cfg; }
    const MobilityTrace& Trace() const { return *m_trace; }
    const std::vector<Flow>& Flows() const { return m_flows; }
    const PacketLedger& Ledger() const { return m_ledger; }
    const aomdv::RoutingProtocol& Agent(NodeId node) const { return *m_agents.at(node); }
    const Kernel& GetKernel() const { return m_kernel; }
    const Channel& GetChannel() const { return *m_channel; }
    const InvariantReport& Invariants() const { return m_invariants; }
    aomdv::RoutingStats TotalRoutingStats() const;

    /// Hop count of the first path `src` installed towards `dst`.
    std::optional<std::uint32_t> FirstRouteHops(NodeId src, NodeId dst) const;

    /// "time node kind uid details" lines; empty unless opts.eventLog.
    const std::vector<std::string>& EventLog() const { return m_log; }

  private:
    Time Now() const override { return m_kernel.Now(); }
    EventHandle ScheduleTimer(Time delay, std::function<void()> fn) override;
    bool CancelTimer(EventHandle handle) override { return m_kernel.Cancel(handle); }
    bool Unicast(NodeId from, NodeId to, const Packet& pkt) override;
    bool Broadcast(NodeId from, const Packet& pkt) override;
    std::uint64_t NextUid() override { return m_nextUid++; }
    void Delivered(NodeId at, const DataHeader& hdr) override;
    void Dropped(NodeId at, const DataHeader& hdr, aomdv::DropCause cause) override;
    void RouteChanged(NodeId at, const aomdv::RouteEntry& entry, aomdv::RouteChange change) override;
    void DataForwarding(NodeId at, const DataHeader& hdr, const aomdv::RouteEntry& route) override;
    bool LogEnabled() const override { return m_opts.eventLog; }
    void Log(NodeId at, const char* kind, std::uint64_t uid, const std::string& details) override;

    void Tick(std::size_t flow, std::uint64_t index);
    void Violation(std::uint64_t& counter, const std::string& what);

    ScenarioConfig m_cfg;
    SimulationOptions m_opts;
    Kernel m_kernel;
    std::unique_ptr<MobilityTrace> m_trace;
    std::unique_ptr<Channel> m_channel;
    std::vector<std::unique_ptr<aomdv::RoutingProtocol>> m_agents;
    std::vector<Flow> m_flows;
    PacketLedger m_ledger;
    InvariantReport m_invariants;
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> m_firstRouteHops;
    std::vector<std::string> m_log;
    std::uint64_t m_nextUid = 1;
};

} // namespace manet

#endif // MANET_SIMULATION_H
