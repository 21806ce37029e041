#include "oracles.h"

#include "manet/simulation.h"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace manet;
using oracle::Cbr;

namespace
{

std::size_t
CountLog(const Simulation& sim, const std::string& kind, NodeId node = kNoNode)
{
    std::size_t n = 0;
    for (const std::string& line : sim.EventLog())
    {
        std::istringstream in(line);
        std::string t, who, k;
        in >> t >> who >> k;
        if (k == kind && (node == kNoNode || who == std::to_string(node)))
        {
            ++n;
        }
    }
    return n;
}

Simulation
Static(std::vector<Vec2> pos, std::vector<Flow> flows, Time horizon, ScenarioConfig cfg = {})
{
    ScenarioConfig base = oracle::StaticConfig(pos.size(), horizon, cfg.area);
    base.radio = cfg.radio;
    base.aomdv = cfg.aomdv;
    auto opts = oracle::StaticOptions(base, pos, std::move(flows));
    opts.eventLog = true;
    return Simulation(base, std::move(opts));
}

} // namespace

TEST_SUITE("aomdv-routing")
{
    TEST_CASE("a live route suppresses further discovery")
    {
        Simulation sim = Static({{100, 100}, {200, 100}}, {Cbr(0, 1, 1, 9)}, 10);
        const auto r = sim.Run();
        CHECK(r.routing.rreqOriginated == 1);
        CHECK(r.metrics.delivered == r.metrics.sent);
        CHECK(r.metrics.sent == 32);
    }

    TEST_CASE("missing route triggers exactly one RREQ with the default TTL")
    {
        Simulation sim = Static({{100, 100}, {200, 100}}, {Cbr(0, 1, 1, 1.1)}, 5);
        sim.RunUntil(1.0);
        CHECK(sim.Agent(0).Stats().rreqOriginated == 1);
        CHECK(sim.Agent(0).DiscoveryPending(1));
        CHECK(sim.Agent(0).Buffered(1) == 1);
        const auto& log = sim.EventLog();
        const auto it = std::find_if(log.begin(), log.end(),
                                     [](const std::string& l) { return l.find("rreq_send") != std::string::npos; });
        REQUIRE(it != log.end());
        CHECK(it->find("ttl=30") != std::string::npos);
        sim.RunUntil(5);
        CHECK(sim.Agent(0).Stats().rreqOriginated == 1);
        CHECK(sim.Agent(0).BufferedTotal() == 0);
    }

    TEST_CASE("discovery gives up after three retries and drops the buffer")
    {
        Simulation sim = Static({{100, 100}, {500, 100}}, {Cbr(0, 1, 10, 11)}, 100);
        const auto r = sim.Run();
        CHECK(r.routing.rreqOriginated == 4);
        CHECK(r.routing.discoveriesFailed == 1);
        CHECK(r.metrics.sent == 4);
        // Drops counted against the ledger: everything not delivered and not queue-dropped.
        CHECK(r.metrics.dropsNoRoute == r.metrics.sent - r.metrics.delivered - r.metrics.dropsQueue);
        CHECK(r.metrics.dropsNoRoute == 4);
        // Waits of 2.8, 5.6, 11.2 and 22.4 s after t = 10.
        std::vector<std::string> fails;
        for (const auto& l : sim.EventLog())
        {
            if (l.find("discovery_fail") != std::string::npos)
            {
                fails.push_back(l);
            }
        }
        REQUIRE(fails.size() == 1);
        CHECK(fails[0].rfind("52.000000", 0) == 0);
    }

    TEST_CASE("destination answers at most k of five distinct copies")
    {
        // Source 0, relays 1..5 in a column, destination 6.
        std::vector<Vec2> pos{{0, 500}};
        for (int i = 0; i < 5; ++i)
        {
            pos.push_back({150, 400.0 + 50 * i});
        }
        pos.push_back({300, 500});
        for (std::size_t k : {1, 3, 5})
        {
            ScenarioConfig cfg;
            cfg.aomdv.kReplies = k;
            cfg.aomdv.maxPaths = 5;
            Simulation sim = Static(pos, {Cbr(0, 6, 1, 1.1)}, 5, cfg);
            sim.Run();
            CHECK(sim.Agent(6).Stats().rrepFromDest == k);
            CHECK(CountLog(sim, "rrep_send", 6) == k);
            const auto* route = sim.Agent(0).Table().Find(6);
            REQUIRE(route != nullptr);
            CHECK(route->paths.size() == k);
            CHECK(aomdv::PathsLinkDisjoint(*route));
        }
    }

    TEST_CASE("duplicate copies are examined once and never re-broadcast")
    {
        Simulation sim = Static({{0, 500}, {150, 450}, {150, 550}, {300, 500}, {450, 500}}, {Cbr(0, 4, 1, 1.1)},
                                5);
        sim.Run();
        // Every node other than the source and destination forwards the flood once.
        for (NodeId n : {1, 2, 3})
        {
            CHECK(sim.Agent(n).Stats().rreqForwarded == 1);
        }
        CHECK(sim.Agent(4).Stats().rreqForwarded == 0);
        CHECK(sim.Agent(0).Stats().rreqForwarded == 0);
    }

    TEST_CASE("four-node line: reply path length equals the BFS distance")
    {
        const std::vector<Vec2> pos{{100, 500}, {300, 500}, {500, 500}, {700, 500}};
        Simulation sim = Static(pos, {Cbr(0, 3, 1, 1.1)}, 5);
        sim.Run();
        const int bfs = oracle::BfsHops(pos, 250, 0)[3];
        CHECK(bfs == 3);
        REQUIRE(sim.FirstRouteHops(0, 3));
        CHECK(*sim.FirstRouteHops(0, 3) == 3);
        CHECK(sim.Ledger().Record(0).hopTrace == std::vector<NodeId>{0, 1, 2, 3});
    }

    TEST_CASE("diamond yields two link-disjoint paths and a FIFO buffer flush")
    {
        Simulation sim = Static({{100, 500}, {280, 640}, {280, 360}, {460, 500}}, {Cbr(0, 3, 1, 3, 20.0)}, 5);
        sim.RunUntil(1.0 + 1e-9);
        CHECK(sim.Agent(0).Buffered(3) == 1);
        sim.RunUntil(5);
        const auto* route = sim.Agent(0).Table().Find(3);
        REQUIRE(route != nullptr);
        CHECK(route->paths.size() == 2);
        CHECK(aomdv::PathsLinkDisjoint(*route));
        CHECK(route->paths[0].hopCount == 2);
        CHECK(route->paths[1].hopCount == 2);
        const auto& recs = sim.Ledger().Records();
        std::vector<Time> arrivals;
        for (const auto& r : recs)
        {
            REQUIRE(r.deliveredAt);
            arrivals.push_back(*r.deliveredAt);
        }
        CHECK(std::is_sorted(arrivals.begin(), arrivals.end()));
    }

    TEST_CASE("one broken path fails over without a RERR; the last one raises a RERR")
    {
        // Relay 1 leaves at t = 20, relay 2 at t = 40.
        const Area area{2000, 2000};
        std::vector<std::vector<Waypoint>> w{
            {{0, 100, 500}, {100, 100, 500}},
            {{0, 280, 640}, {20, 280, 640}, {21, 1900, 1900}, {100, 1900, 1900}},
            {{0, 280, 360}, {40, 280, 360}, {41, 1900, 100}, {100, 1900, 100}},
            {{0, 460, 500}, {100, 460, 500}},
        };
        ScenarioConfig cfg = oracle::StaticConfig(4, 60, area);
        SimulationOptions opts;
        opts.trace = MobilityTrace(area, 100, w);
        opts.flows = std::vector<Flow>{Cbr(0, 3, 1, 59)};
        opts.eventLog = true;
        Simulation sim(cfg, std::move(opts));
        sim.RunUntil(19);
        REQUIRE(sim.Agent(0).Table().Find(3)->paths.size() == 2);
        const NodeId primary = sim.Agent(0).Table().Find(3)->Primary()->nextHop;
        sim.RunUntil(60);
        const auto r = sim.Summarize();
        CHECK(r.routing.linkBreaks >= 1);
        CHECK(sim.Agent(0).Stats().rerrSent >= 1); // last path gone at t = 40
        CHECK(r.invariants.Clean());
        CHECK(r.metrics.dropsNoRoute > 0);
        CHECK(primary != kNoNode);
    }

    TEST_CASE("a RERR cascades up a five-node chain")
    {
        // Node 4 walks out of range at t = 20.
        std::vector<std::vector<Waypoint>> w;
        for (int i = 0; i < 4; ++i)
        {
            w.push_back({{0, 100.0 + 200 * i, 500}, {100, 100.0 + 200 * i, 500}});
        }
        w.push_back({{0, 900, 500}, {20, 900, 500}, {21, 900, 990}, {100, 900, 990}});
        ScenarioConfig cfg = oracle::StaticConfig(5, 30);
        SimulationOptions opts;
        opts.trace = MobilityTrace({}, 100, w);
        opts.flows = std::vector<Flow>{Cbr(0, 4, 1, 21.2)};
        opts.eventLog = true;
        Simulation sim(cfg, std::move(opts));
        sim.RunUntil(19);
        for (NodeId n = 0; n < 4; ++n)
        {
            REQUIRE(sim.Agent(n).Table().Valid(4) != nullptr);
        }
        sim.RunUntil(21.5);
        // Oracle: node 4 is unreachable from everyone after the cut.
        const Time t = 21.5;
        std::vector<Vec2> pos;
        for (NodeId n = 0; n < 5; ++n)
        {
            pos.push_back(sim.Trace().PositionAt(n, t));
        }
        const auto hops = oracle::BfsHops(pos, 250, 4);
        for (NodeId n = 0; n < 4; ++n)
        {
            REQUIRE(hops[n] < 0);
            CHECK(sim.Agent(n).Table().Valid(4) == nullptr);
        }
        CHECK(sim.Agent(3).Stats().linkBreaks >= 1);
        for (NodeId n : {1, 2, 3})
        {
            CHECK(sim.Agent(n).Stats().rerrSent >= 1);
        }
    }

    TEST_CASE("continuous forwarding keeps the route alive past its lifetime")
    {
        Simulation sim = Static({{100, 500}, {300, 500}, {500, 500}}, {Cbr(0, 2, 1, 40)}, 45);
        const auto r = sim.Run();
        CHECK(r.routing.rreqOriginated == 1);
        CHECK(r.metrics.delivered == r.metrics.sent);
    }

    TEST_CASE("an idle route expires and the next packet rediscovers")
    {
        Simulation sim = Static({{100, 500}, {300, 500}, {500, 500}}, {Cbr(0, 2, 1, 2), Cbr(0, 2, 30, 31)}, 40);
        sim.RunUntil(25);
        CHECK(sim.Agent(0).Table().Valid(2) == nullptr);
        const auto r = sim.Run();
        CHECK(r.routing.rreqOriginated == 2);
        CHECK(r.metrics.delivered == r.metrics.sent);
    }

    TEST_CASE("no traffic means no control packets")
    {
        ScenarioConfig cfg;
        cfg.nodes = 20;
        cfg.horizon = 100;
        cfg.traffic.flows = 0;
        Simulation sim(cfg);
        const auto r = sim.Run();
        CHECK(r.routing.controlSent == 0);
        CHECK(r.metrics.sent == 0);
        CHECK(r.eventsProcessed > 0); // purge timers still tick
    }

    TEST_CASE("intermediate replies can be switched off")
    {
        const std::vector<Vec2> pos{{100, 500}, {300, 500}, {500, 500}, {700, 500}};
        for (bool on : {true, false})
        {
            ScenarioConfig cfg;
            cfg.aomdv.intermediateReplies = on;
            // 0 -> 3 first, then 1 -> 3 once node 1 already knows the way.
            Simulation sim = Static(pos, {Cbr(0, 3, 1, 8), Cbr(1, 3, 5, 8)}, 10, cfg);
            const auto r = sim.Run();
            CHECK(r.metrics.delivered == r.metrics.sent);
            if (!on)
            {
                CHECK(r.routing.rrepFromIntermediate == 0);
            }
        }
    }

    TEST_CASE("mobile runs keep every invariant")
    {
        for (MobilityModel m : {MobilityModel::RandomWaypoint, MobilityModel::RandomDirection,
                                MobilityModel::ProbRandomWalk})
        {
            ScenarioConfig cfg;
            cfg.model = m;
            cfg.nodes = 40;
            cfg.mobility.speed = 30;
            cfg.horizon = 150;
            cfg.traffic.stop = 140;
            cfg.seed = 4;
            Simulation sim(cfg);
            const auto r = sim.Run();
            INFO(ToString(m));
            for (const auto& s : r.invariants.samples)
            {
                INFO(s);
            }
            CHECK(r.invariants.Clean());
            CHECK(r.invariants.routeSnapshots > 0);
            CHECK(r.invariants.forwardingChecks > 0);
            CHECK(LedgerCloses(r.metrics));
        }
    }

    TEST_CASE("RREQ relays advertise their own distance rather than the copy's length")
    {
        // Here reverse routes are often learned from RREPs before the RREQ copy arrives, so
        // re-advertising the copy's length used to let a neighbour rank itself equal to us.
        ScenarioConfig cfg;
        cfg.model = MobilityModel::RandomDirection;
        cfg.nodes = 30;
        cfg.mobility.speed = 20;
        cfg.horizon = 200;
        cfg.traffic.stop = 190;
        cfg.seed = 3;
        Simulation sim(cfg);
        const auto r = sim.Run();
        for (const auto& s : r.invariants.samples)
        {
            INFO(s);
        }
        CHECK(r.invariants.forwardingChecks > 5000);
        CHECK(r.invariants.loopRuleViolations == 0);
        CHECK(r.invariants.hopBoundViolations == 0);
    }

    TEST_CASE("event log lines carry time, node, kind and packet id")
    {
        Simulation sim = Static({{100, 100}, {200, 100}}, {Cbr(0, 1, 1, 1.1)}, 3);
        sim.Run();
        REQUIRE_FALSE(sim.EventLog().empty());
        for (const std::string& line : sim.EventLog())
        {
            std::istringstream in(line);
            double t;
            unsigned node;
            std::string kind;
            std::uint64_t uid;
            REQUIRE(static_cast<bool>(in >> t >> node >> kind >> uid));
        }
        CHECK(CountLog(sim, "data_recv", 1) == 1);
    }
}
