#include "manet/rng.h"
#include "manet/sim-kernel.h"

#include <doctest.h>

#include <set>
#include <stdexcept>
#include <vector>

using namespace manet;

TEST_SUITE("sim-kernel")
{
    TEST_CASE("events fire in time order")
    {
        Kernel k;
        std::vector<int> order;
        k.Schedule(5, EventKind::Other, [&] { order.push_back(5); });
        k.Schedule(3, EventKind::Other, [&] { order.push_back(3); });
        k.RunUntil(10);
        CHECK(order == std::vector<int>{3, 5});
    }

    TEST_CASE("equal times fire in insertion order")
    {
        Kernel k;
        std::vector<int> order;
        k.Schedule(7, EventKind::Other, [&] { order.push_back(1); });
        k.Schedule(7, EventKind::Other, [&] { order.push_back(2); });
        k.Schedule(7, EventKind::Other, [&] { order.push_back(3); });
        k.RunUntil(7);
        CHECK(order == std::vector<int>{1, 2, 3});
    }

    TEST_CASE("scheduling in the past is rejected")
    {
        Kernel k;
        k.Schedule(4, EventKind::Other, [] {});
        k.RunUntil(4);
        CHECK_THROWS_AS(k.Schedule(3, EventKind::Other, [] {}), std::invalid_argument);
        CHECK_THROWS_AS(k.ScheduleIn(-1, EventKind::Other, [] {}), std::invalid_argument);
        CHECK_THROWS_AS(k.RunUntil(2), std::invalid_argument);
    }

    TEST_CASE("empty queue completes at the requested time")
    {
        Kernel k;
        const RunReport r = k.RunUntil(1000);
        CHECK(r.eventsProcessed == 0);
        CHECK(r.finalClock == 1000.0);
        CHECK(k.Now() == 1000.0);
    }

    TEST_CASE("horizon boundary")
    {
        Kernel k;
        int fired = 0;
        k.Schedule(999.9, EventKind::Other, [&] { ++fired; });
        k.Schedule(1000.1, EventKind::Other, [&] { ++fired; });
        const RunReport r = k.RunUntil(1000);
        CHECK(r.eventsProcessed == 1);
        CHECK(fired == 1);
        CHECK(k.Pending() == 1);
        k.Schedule(1000, EventKind::Other, [&] { ++fired; });
        k.RunUntil(1000);
        CHECK(fired == 2);
    }

    TEST_CASE("cancel semantics")
    {
        Kernel k;
        int fired = 0;
        EventHandle a = k.Schedule(1, EventKind::Timer, [&] { ++fired; });
        EventHandle b = k.Schedule(2, EventKind::Timer, [&] { ++fired; });
        CHECK(k.Cancel(a));
        CHECK_FALSE(k.Cancel(a));
        k.RunUntil(5);
        CHECK(fired == 1);
        CHECK_FALSE(k.Cancel(b));
        CHECK_FALSE(k.Cancel(EventHandle{}));
    }

    TEST_CASE("events scheduled from actions respect the order")
    {
        Kernel k;
        std::vector<DispatchInfo> seen;
        k.SetDispatchObserver([&](const DispatchInfo& d) { seen.push_back(d); });
        RngStream rng(9, StreamKind::Topology);
        std::function<void()> spawn = [&] {
            if (seen.size() < 2000)
            {
                k.ScheduleIn(rng.Uniform() < 0.2 ? 0.0 : rng.Uniform(0.0, 3.0), EventKind::Other, spawn);
                k.ScheduleIn(rng.Uniform(0.0, 3.0), EventKind::Other, spawn);
            }
        };
        k.Schedule(0, EventKind::Other, spawn);
        k.RunUntil(1e9);
        REQUIRE(seen.size() > 100);
        std::set<std::uint64_t> seqs;
        for (std::size_t i = 1; i < seen.size(); ++i)
        {
            const bool ordered = seen[i - 1].time < seen[i].time ||
                                 (seen[i - 1].time == seen[i].time && seen[i - 1].seq < seen[i].seq);
            REQUIRE(ordered);
        }
        for (const auto& d : seen)
        {
            CHECK(seqs.insert(d.seq).second);
        }
    }

    TEST_CASE("identical schedules give identical digests")
    {
        auto run = [](std::uint64_t seed) {
            Kernel k;
            RngStream rng(seed, StreamKind::Topology);
            for (int i = 0; i < 500; ++i)
            {
                EventHandle h = k.Schedule(rng.Uniform(0.0, 100.0), EventKind::Timer, [] {});
                if (i % 7 == 0)
                {
                    k.Cancel(h);
                }
            }
            k.RunUntil(100);
            return k.TraceDigest();
        };
        CHECK(run(1) == run(1));
        CHECK(run(1) != run(2));
    }
}

TEST_SUITE("rng")
{
    TEST_CASE("same seed and stream reproduce")
    {
        RngStream a(42, StreamKind::Mobility, 3);
        RngStream b(42, StreamKind::Mobility, 3);
        for (int i = 0; i < 1000; ++i)
        {
            REQUIRE(a.NextU64() == b.NextU64());
        }
    }

    TEST_CASE("streams are independent of each other")
    {
        RngStream a(42, StreamKind::Mobility, 0);
        RngStream b(42, StreamKind::Mobility, 1);
        RngStream c(42, StreamKind::Traffic, 0);
        RngStream d(43, StreamKind::Mobility, 0);
        const auto x = a.NextU64();
        CHECK(x != b.NextU64());
        CHECK(x != c.NextU64());
        CHECK(x != d.NextU64());
    }

    TEST_CASE("mt19937_64 reference value")
    {
        // 10000th output of a default-seeded mt19937_64 is fixed by the C++ standard.
        std::mt19937_64 e;
        e.discard(9999);
        CHECK(e() == 9981545732273789042ull);
    }

    TEST_CASE("uniform ranges")
    {
        RngStream r(7, StreamKind::Topology);
        double sum = 0.0;
        for (int i = 0; i < 100000; ++i)
        {
            const double u = r.Uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
            const auto n = r.UniformInt(7);
            REQUIRE(n < 7);
        }
        CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
        CHECK_THROWS_AS(r.UniformInt(0), std::invalid_argument);
    }
}
