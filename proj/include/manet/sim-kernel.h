#ifndef MANET_SIM_KERNEL_H
#define MANET_SIM_KERNEL_H

#include "manet/types.h"

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace manet
{

enum class EventKind : std::uint8_t
{
    Delivery,
    Timer,
    Tick,
    Other,
};

class EventHandle
{
  public:
    EventHandle() = default;
    explicit EventHandle(std::uint64_t seq)
        : m_seq(seq)
    {
    }

    std::uint64_t Seq() const { return m_seq; }
    bool IsNull() const { return m_seq == 0; }

  private:
    std::uint64_t m_seq = 0;
};

struct DispatchInfo
{
    Time time;
    std::uint64_t seq;
    EventKind kind;
};

struct RunReport
{
    std::uint64_t eventsProcessed = 0;
    Time finalClock = 0.0;
};

/**
 * Discrete-event engine. Events are totally ordered by (fire time, insertion
 * sequence); equal times fire in insertion order. Single-threaded.
 */
class Kernel
{
  public:
    using Action = std::function<void()>;

    Kernel() = default;
    Kernel(const Kernel&) = delete;
    Kernel& operator=(const Kernel&) = delete;

    /// Throws std::invalid_argument when at < Now() or at is not finite.
    EventHandle Schedule(Time at, EventKind kind, Action action);
    EventHandle ScheduleIn(Time delay, EventKind kind, Action action);

    /// True if the event was still pending and is now inert.
    bool Cancel(EventHandle handle);

    /**
     * Process every event with fire time <= end. The clock reads `end`
     * afterwards. Throws std::invalid_argument when end < Now().
     */
    RunReport RunUntil(Time end);

    Time Now() const { return m_now; }
    std::size_t Pending() const { return m_live.size(); }
    std::uint64_t EventsProcessed() const { return m_processed; }

    /// FNV-1a digest over (time, seq, kind) of every dispatched event.
    std::uint64_t TraceDigest() const { return m_digest; }

    void SetDispatchObserver(std::function<void(const DispatchInfo&)> observer);

  private:
    struct Entry
    {
        Time time;
        std::uint64_t seq;
        EventKind kind;
        Action action;
    };

    struct Later
    {
        bool operator()(const Entry& a, const Entry& b) const
        {
            if (a.time != b.time)
            {
                return a.time > b.time;
            }
            return a.seq > b.seq;
        }
    };

    void Digest(const Entry& e);

    std::vector<Entry> m_heap;
    std::unordered_set<std::uint64_t> m_live;
    std::function<void(const DispatchInfo&)> m_observer;
    Time m_now = 0.0;
    std::uint64_t m_nextSeq = 1;
    std::uint64_t m_processed = 0;
    std::uint64_t m_digest = 0xcbf29ce484222325ull;
};

} // namespace manet

#endif // MANET_SIM_KERNEL_H
