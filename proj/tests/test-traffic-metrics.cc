#include "oracles.h"

#include "manet/metrics.h"
#include "manet/simulation.h"
#include "manet/traffic.h"

#include <doctest.h>

#include <set>

using namespace manet;

TEST_SUITE("traffic")
{
    TEST_CASE("rate times duration packets")
    {
        const Flow f{0, 1, 4.0, 512, 10, 20};
        CHECK(FlowPacketCount(f) == 40);
        CHECK(FlowTickTime(f, 0) == 10.0);
        CHECK(FlowTickTime(f, 39) == doctest::Approx(19.75));
        CHECK(FlowPacketCount(Flow{0, 1, 3.0, 512, 0, 1}) == 3);
    }

    TEST_CASE("simulated sources emit exactly the scheduled packets")
    {
        ScenarioConfig cfg = oracle::StaticConfig(2, 30);
        auto opts = oracle::StaticOptions(cfg, {{100, 100}, {200, 100}}, {oracle::Cbr(0, 1, 10, 20)});
        Simulation sim(cfg, std::move(opts));
        const auto r = sim.Run();
        CHECK(r.metrics.sent == 40);
        const auto& recs = sim.Ledger().Records();
        for (std::size_t i = 0; i < recs.size(); ++i)
        {
            CHECK(recs[i].sentAt == doctest::Approx(10.0 + 0.25 * i));
        }
    }

    TEST_CASE("zero flows send nothing and discover nothing")
    {
        ScenarioConfig cfg;
        cfg.nodes = 10;
        cfg.horizon = 50;
        cfg.traffic.flows = 0;
        Simulation sim(cfg);
        const auto r = sim.Run();
        CHECK(r.metrics.sent == 0);
        CHECK(r.routing.rreqOriginated == 0);
        CHECK_FALSE(r.metrics.pdr);
        CHECK_FALSE(r.metrics.avgDelay);
    }

    TEST_CASE("pairs are distinct")
    {
        TrafficConfig cfg;
        for (std::uint64_t seed = 1; seed <= 20; ++seed)
        {
            const auto flows = SampleFlows(50, cfg, seed);
            REQUIRE(flows.size() == 10);
            std::set<std::pair<NodeId, NodeId>> pairs;
            for (const Flow& f : flows)
            {
                CHECK(f.src != f.dst);
                CHECK(f.src < 50);
                CHECK(f.dst < 50);
                pairs.insert({f.src, f.dst});
            }
            CHECK(pairs.size() == 10);
        }
        cfg.flows = 6;
        const auto all = SampleFlows(3, cfg, 1); // every ordered pair of 3 nodes
        std::set<std::pair<NodeId, NodeId>> pairs;
        for (const Flow& f : all)
        {
            pairs.insert({f.src, f.dst});
        }
        CHECK(pairs.size() == 6);
    }

    TEST_CASE("too many flows are rejected")
    {
        TrafficConfig cfg;
        cfg.flows = 7;
        CHECK_THROWS_AS(SampleFlows(3, cfg, 1), std::invalid_argument);
        cfg.flows = 1;
        CHECK_THROWS_AS(SampleFlows(1, cfg, 1), std::invalid_argument);
    }

    TEST_CASE("flow sampling follows its own stream only")
    {
        TrafficConfig cfg;
        CHECK(SampleFlows(50, cfg, 3) == SampleFlows(50, cfg, 3));
        CHECK(SampleFlows(50, cfg, 3) != SampleFlows(50, cfg, 4));
    }
}

TEST_SUITE("metrics")
{
    TEST_CASE("delivery ratio")
    {
        CHECK(*PacketDeliveryRatio(778, 1000) == doctest::Approx(0.778));
        CHECK(*PacketDeliveryRatio(1000, 1000) == 1.0);
        CHECK_FALSE(PacketDeliveryRatio(0, 0));
        CHECK(*PacketDeliveryRatio(0, 5) == 0.0);
    }

    TEST_CASE("average delay over delivered packets only")
    {
        CHECK(*AverageDelay(std::vector<double>{1.0, 3.0}) == 2.0);
        CHECK_FALSE(AverageDelay(std::vector<double>{}));
        PacketLedger l;
        const auto a = l.Originate(0, 0, 1, 1.0);
        const auto b = l.Originate(0, 0, 1, 2.0);
        const auto c = l.Originate(0, 0, 1, 3.0);
        l.Deliver(a, 2.0);
        l.Deliver(b, 5.0);
        l.Drop(c, PacketFate::DroppedNoRoute);
        const RunMetrics m = l.Finalize(0);
        CHECK(*m.avgDelay == 2.0);
        CHECK(*m.pdr == doctest::Approx(2.0 / 3.0));
        CHECK(m.dropsNoRoute == 1);
        CHECK(LedgerCloses(m));
    }

    TEST_CASE("ledger settles each packet once")
    {
        PacketLedger l;
        const auto a = l.Originate(0, 0, 1, 1.0);
        l.RecordHop(a, 2);
        l.RecordHop(a, 1);
        l.Deliver(a, 1.5);
        CHECK(l.Record(a).hopTrace == std::vector<NodeId>{0, 2, 1});
        CHECK_THROWS(l.Deliver(a, 2.0));
        CHECK_THROWS(l.Drop(a, PacketFate::DroppedLoss));
        CHECK_THROWS(l.Drop(l.Originate(0, 0, 1, 2.0), PacketFate::Delivered));
    }

    TEST_CASE("single-hop delay with zero jitter is the serialization time")
    {
        ScenarioConfig cfg = oracle::StaticConfig(2, 20);
        cfg.radio.jitterMax = 0.0;
        auto opts = oracle::StaticOptions(cfg, {{100, 100}, {200, 100}}, {oracle::Cbr(0, 1, 1, 10)});
        Simulation sim(cfg, std::move(opts));
        const auto r = sim.Run();
        // The first packet also waits for discovery; the rest ride the established route.
        std::vector<double> delays;
        for (const auto& rec : sim.Ledger().Records())
        {
            if (rec.packetId > 0)
            {
                delays.push_back(*rec.deliveredAt - rec.sentAt);
            }
        }
        for (double d : delays)
        {
            CHECK(d == doctest::Approx(512 * 8 / 2e6).epsilon(1e-9));
        }
        CHECK(*r.metrics.pdr == 1.0);
    }

    TEST_CASE("ledger dump has one line per packet")
    {
        PacketLedger l;
        l.Deliver(l.Originate(0, 0, 1, 1.0), 1.25);
        l.Originate(1, 1, 0, 2.0);
        const std::string text = WriteLedger(l.Records());
        CHECK(text == "# id flow src dst sent_at delivered_at fate hops\n"
                      "0 0 0 1 1.000000 1.250000 delivered 0\n"
                      "1 1 1 0 2.000000 NA inflight 1\n");
    }
}
