#include "manet/sim-kernel.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace manet
{

EventHandle
Kernel::Schedule(Time at, EventKind kind, Action action)
{
    if (!std::isfinite(at))
    {
        throw std::invalid_argument("Schedule: non-finite event time");
    }
    if (at < m_now)
    {
        throw std::invalid_argument("Schedule: event time " + std::to_string(at) +
                                    " is before the current clock " + std::to_string(m_now));
    }
    const std::uint64_t seq = m_nextSeq++;
    m_heap.push_back(Entry{at, seq, kind, std::move(action)});
    std::push_heap(m_heap.begin(), m_heap.end(), Later{});
    m_live.insert(seq);
    return EventHandle(seq);
}

EventHandle
Kernel::ScheduleIn(Time delay, EventKind kind, Action action)
{
    return Schedule(m_now + delay, kind, std::move(action));
}

bool
Kernel::Cancel(EventHandle handle)
{
    return m_live.erase(handle.Seq()) > 0;
}

void
Kernel::SetDispatchObserver(std::function<void(const DispatchInfo&)> observer)
{
    m_observer = std::move(observer);
}

void
Kernel::Digest(const Entry& e)
{
    auto mix = [this](std::uint64_t v) {
        for (int i = 0; i < 8; ++i)
        {
            m_digest ^= (v >> (8 * i)) & 0xffu;
            m_digest *= 0x100000001b3ull;
        }
    };
    mix(std::bit_cast<std::uint64_t>(e.time));
    mix(e.seq);
    mix(static_cast<std::uint64_t>(e.kind));
}

RunReport
Kernel::RunUntil(Time end)
{
    if (end < m_now)
    {
        throw std::invalid_argument("RunUntil: end time is before the current clock");
    }
    RunReport report;
    while (!m_heap.empty() && m_heap.front().time <= end)
    {
        std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
        Entry e = std::move(m_heap.back());
        m_heap.pop_back();
        if (m_live.erase(e.seq) == 0)
        {
            continue; // cancelled
        }
        m_now = e.time;
        Digest(e);
        ++m_processed;
        ++report.eventsProcessed;
        if (m_observer)
        {
            m_observer(DispatchInfo{e.time, e.seq, e.kind});
        }
        e.action();
    }
    m_now = end;
    report.finalClock = m_now;
    return report;
}

} // namespace manet
