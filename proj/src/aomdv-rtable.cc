#include "manet/aomdv-rtable.h"

#include <algorithm>

namespace manet
{
namespace aomdv
{

bool
RouteEntry::IsDisjointFrom(NodeId nextHop, NodeId firstHop) const
{
    return std::none_of(paths.begin(), paths.end(), [&](const PathEntry& p) {
        return p.nextHop == nextHop || p.firstHop == firstHop;
    });
}

std::size_t
RouteEntry::PruneExpired(Time now)
{
    const auto before = paths.size();
    std::erase_if(paths, [now](const PathEntry& p) { return p.expiresAt <= now; });
    return before - paths.size();
}

bool
RouteEntry::RemoveVia(NodeId neighbor)
{
    return std::erase_if(paths, [neighbor](const PathEntry& p) { return p.nextHop == neighbor; }) > 0;
}

UpdateVerdict
RouteUpdate(RouteEntry& entry, const Advertisement& adv, Time expiresAt, std::size_t maxPaths)
{
    const PathEntry path{adv.nextHop, adv.firstHop, adv.hopCount + 1, expiresAt};
    const bool fresher = adv.seq > entry.seqNum;
    const bool sameSeqUnadvertised = adv.seq == entry.seqNum && !entry.advertisedHopCount;
    if (fresher || sameSeqUnadvertised)
    {
        entry.seqNum = adv.seq;
        entry.paths.assign(1, path);
        entry.advertisedHopCount = path.hopCount;
        return UpdateVerdict::Replaced;
    }
    if (adv.seq < entry.seqNum)
    {
        return UpdateVerdict::Rejected;
    }
    if (adv.hopCount >= *entry.advertisedHopCount)
    {
        return UpdateVerdict::Rejected;
    }
    if (!entry.IsDisjointFrom(adv.nextHop, adv.firstHop) || entry.paths.size() >= maxPaths)
    {
        return UpdateVerdict::Rejected;
    }
    entry.paths.push_back(path);
    return UpdateVerdict::Added;
}

bool
PathsLinkDisjoint(const RouteEntry& entry)
{
    for (std::size_t i = 0; i < entry.paths.size(); ++i)
    {
        for (std::size_t j = i + 1; j < entry.paths.size(); ++j)
        {
            if (entry.paths[i].nextHop == entry.paths[j].nextHop ||
                entry.paths[i].firstHop == entry.paths[j].firstHop)
            {
                return false;
            }
        }
    }
    return true;
}

RouteEntry*
RouteTable::Find(NodeId dest)
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

const RouteEntry*
RouteTable::Find(NodeId dest) const
{
    auto it = m_entries.find(dest);
    return it == m_entries.end() ? nullptr : &it->second;
}

RouteEntry&
RouteTable::FindOrCreate(NodeId dest)
{
    auto [it, inserted] = m_entries.try_emplace(dest);
    if (inserted)
    {
        it->second.dest = dest;
    }
    return it->second;
}

const RouteEntry*
RouteTable::Valid(NodeId dest) const
{
    const RouteEntry* e = Find(dest);
    return e && e->HasPath() ? e : nullptr;
}

void
RouteTable::Purge(Time now)
{
    for (auto it = m_entries.begin(); it != m_entries.end();)
    {
        RouteEntry& e = it->second;
        const bool hadPaths = e.HasPath();
        e.PruneExpired(now);
        const bool drop = e.paths.empty() && (hadPaths || e.retainUntil <= now);
        it = drop ? m_entries.erase(it) : std::next(it);
    }
}

} // namespace aomdv
} // namespace manet
