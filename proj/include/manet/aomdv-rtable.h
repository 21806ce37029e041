#ifndef MANET_AOMDV_RTABLE_H
#define MANET_AOMDV_RTABLE_H

#include "manet/packet.h"
#include "manet/types.h"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace manet
{
namespace aomdv
{

struct PathEntry
{
    NodeId nextHop = kNoNode;
    // Neighbour of the route's far end on this path; judges link-disjointness.
    NodeId firstHop = kNoNode;
    std::uint32_t hopCount = 0;
    Time expiresAt = 0.0;

    bool operator==(const PathEntry&) const = default;
};

/**
 * Per-destination multipath state. All paths are pairwise distinct in next
 * hop and in first hop, and none is longer than the advertised hop count.
 * The advertised hop count is fixed the first time a path is accepted at a
 * sequence number and is unset after an invalidation bumps the number.
 */
struct RouteEntry
{
    NodeId dest = kNoNode;
    SeqNum seqNum = 0;
    std::optional<std::uint32_t> advertisedHopCount;
    std::vector<PathEntry> paths;
    // Empty entries are kept until this time so their sequence number survives.
    Time retainUntil = 0.0;

    bool HasPath() const { return !paths.empty(); }
    const PathEntry* Primary() const { return paths.empty() ? nullptr : &paths.front(); }
    bool IsDisjointFrom(NodeId nextHop, NodeId firstHop) const;
    /// Removes paths with expiresAt <= now; returns how many were removed.
    std::size_t PruneExpired(Time now);
    /// Removes the path through `neighbor`, if any.
    bool RemoveVia(NodeId neighbor);
};

/// A routing advertisement heard from neighbour `nextHop`.
struct Advertisement
{
    SeqNum seq = 0;
    // The neighbour's own advertised distance to the destination.
    std::uint32_t hopCount = 0;
    NodeId nextHop = kNoNode;
    NodeId firstHop = kNoNode;
};

enum class UpdateVerdict
{
    Replaced,
    Added,
    Rejected,
};

/**
 * Advertised-hop-count update rule.
 *
 * A fresher sequence number replaces the entry; its advertised hop count
 * becomes the new path's length. At an equal sequence number the path is
 * added only if the neighbour's advertised distance is strictly below ours,
 * it shares neither next hop nor first hop with a stored path, and there is
 * room. Stale sequence numbers are rejected. Callers prune expired paths
 * first.
 */
UpdateVerdict RouteUpdate(RouteEntry& entry, const Advertisement& adv, Time expiresAt,
                          std::size_t maxPaths);

/// Every pair of paths distinct in next hop and first hop.
bool PathsLinkDisjoint(const RouteEntry& entry);

class RouteTable
{
  public:
    RouteEntry* Find(NodeId dest);
    const RouteEntry* Find(NodeId dest) const;
    RouteEntry& FindOrCreate(NodeId dest);
    void Erase(NodeId dest) { m_entries.erase(dest); }

    /// Live route: entry present with a path.
    const RouteEntry* Valid(NodeId dest) const;

    /**
     * Drops expired paths. Entries left empty by expiry disappear at once;
     * entries emptied earlier by an invalidation go when retainUntil passes.
     */
    void Purge(Time now);

    const std::map<NodeId, RouteEntry>& Entries() const { return m_entries; }
    std::map<NodeId, RouteEntry>& Entries() { return m_entries; }
    std::size_t Size() const { return m_entries.size(); }

  private:
    std::map<NodeId, RouteEntry> m_entries;
};

} // namespace aomdv
} // namespace manet

#endif // MANET_AOMDV_RTABLE_H
