#include "manet/aomdv-rtable.h"

#include <doctest.h>

using namespace manet;
using namespace manet::aomdv;

namespace
{

RouteEntry
Entry(SeqNum seq, std::uint32_t advertised, std::vector<PathEntry> paths)
{
    RouteEntry e;
    e.dest = 9;
    e.seqNum = seq;
    e.advertisedHopCount = advertised;
    e.paths = std::move(paths);
    return e;
}

} // namespace

TEST_SUITE("aomdv-rtable")
{
    TEST_CASE("fresher sequence number replaces regardless of hop count")
    {
        RouteEntry e = Entry(5, 2, {{1, 1, 2, 100}, {2, 2, 2, 100}});
        CHECK(RouteUpdate(e, {6, 10, 3, 3}, 50, 3) == UpdateVerdict::Replaced);
        CHECK(e.seqNum == 6);
        REQUIRE(e.paths.size() == 1);
        CHECK(e.paths[0] == PathEntry{3, 3, 11, 50});
        CHECK(e.advertisedHopCount == 11u);
    }

    TEST_CASE("equal advertised distance is rejected")
    {
        RouteEntry e = Entry(5, 4, {{1, 1, 4, 100}});
        CHECK(RouteUpdate(e, {5, 4, 2, 2}, 50, 3) == UpdateVerdict::Rejected);
        CHECK(e.paths.size() == 1);
    }

    TEST_CASE("shorter alternate with a colliding first hop is rejected")
    {
        RouteEntry e = Entry(5, 4, {{1, 7, 4, 100}});
        CHECK(RouteUpdate(e, {5, 3, 2, 7}, 50, 3) == UpdateVerdict::Rejected);
        CHECK(RouteUpdate(e, {5, 3, 1, 8}, 50, 3) == UpdateVerdict::Rejected);
        CHECK(e.paths.size() == 1);
    }

    TEST_CASE("disjoint shorter alternate is added and the advertised count holds")
    {
        RouteEntry e = Entry(5, 4, {{1, 7, 4, 100}});
        CHECK(RouteUpdate(e, {5, 3, 2, 8}, 50, 3) == UpdateVerdict::Added);
        REQUIRE(e.paths.size() == 2);
        CHECK(e.paths[1] == PathEntry{2, 8, 4, 50});
        CHECK(e.advertisedHopCount == 4u);
        CHECK(PathsLinkDisjoint(e));
        CHECK(RouteUpdate(e, {5, 0, 3, 9}, 50, 3) == UpdateVerdict::Added);
        CHECK(e.paths[2].hopCount == 1);
        CHECK(RouteUpdate(e, {5, 0, 4, 10}, 50, 3) == UpdateVerdict::Rejected); // full
        CHECK(e.advertisedHopCount == 4u);
    }

    TEST_CASE("stale sequence number is rejected")
    {
        RouteEntry e = Entry(5, 4, {{1, 7, 4, 100}});
        CHECK(RouteUpdate(e, {4, 0, 2, 8}, 50, 3) == UpdateVerdict::Rejected);
    }

    TEST_CASE("fresh entry takes the first advertisement")
    {
        RouteEntry e;
        e.dest = 3;
        CHECK(RouteUpdate(e, {0, 0, 3, 3}, 10, 3) == UpdateVerdict::Replaced);
        CHECK(e.advertisedHopCount == 1u);
        // An invalidated entry (advertised count unset) accepts its own sequence number again.
        e.paths.clear();
        e.advertisedHopCount.reset();
        e.seqNum = 4;
        CHECK(RouteUpdate(e, {4, 2, 1, 5}, 10, 3) == UpdateVerdict::Replaced);
        CHECK(e.advertisedHopCount == 3u);
    }

    TEST_CASE("expiry and pruning")
    {
        RouteEntry e = Entry(1, 3, {{1, 1, 3, 10.0}, {2, 2, 2, 20.0}});
        CHECK(e.PruneExpired(9.0) == 0);
        CHECK(e.PruneExpired(10.001) == 1);
        REQUIRE(e.paths.size() == 1);
        CHECK(e.Primary()->nextHop == 2);
        CHECK(e.RemoveVia(2));
        CHECK_FALSE(e.RemoveVia(2));
        CHECK_FALSE(e.HasPath());
    }

    TEST_CASE("table purge")
    {
        RouteTable t;
        auto& a = t.FindOrCreate(1);
        a.seqNum = 1;
        a.advertisedHopCount = 1;
        a.paths = {{1, 1, 1, 10.0}};
        auto& b = t.FindOrCreate(2);
        b.seqNum = 3;
        b.retainUntil = 15.0; // invalidated earlier
        CHECK(t.Valid(1) != nullptr);
        CHECK(t.Valid(2) == nullptr);
        t.Purge(12.0);
        CHECK(t.Find(1) == nullptr);
        CHECK(t.Find(2) != nullptr);
        t.Purge(15.0);
        CHECK(t.Size() == 0);
    }

    TEST_CASE("disjointness predicate")
    {
        CHECK(PathsLinkDisjoint(Entry(1, 3, {{1, 4, 3, 1}, {2, 5, 3, 1}})));
        CHECK_FALSE(PathsLinkDisjoint(Entry(1, 3, {{1, 4, 3, 1}, {1, 5, 3, 1}})));
        CHECK_FALSE(PathsLinkDisjoint(Entry(1, 3, {{1, 4, 3, 1}, {2, 4, 3, 1}})));
    }
}
