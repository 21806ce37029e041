#include "manet/metrics.h"

#include <cstdio>
#include <stdexcept>

namespace manet
{

std::optional<double>
PacketDeliveryRatio(std::uint64_t delivered, std::uint64_t sent)
{
    if (sent == 0)
    {
        return std::nullopt;
    }
    return static_cast<double>(delivered) / static_cast<double>(sent);
}

std::optional<double>
AverageDelay(const std::vector<double>& delays)
{
    if (delays.empty())
    {
        return std::nullopt;
    }
    double sum = 0.0;
    for (double d : delays)
    {
        sum += d;
    }
    return sum / static_cast<double>(delays.size());
}

std::optional<double>
AverageDelay(const std::vector<PacketRecord>& records)
{
    std::vector<double> delays;
    for (const PacketRecord& r : records)
    {
        if (r.deliveredAt)
        {
            delays.push_back(*r.deliveredAt - r.sentAt);
        }
    }
    return AverageDelay(delays);
}

bool
LedgerCloses(const RunMetrics& m)
{
    return m.sent == m.delivered + m.dropsQueue + m.dropsNoRoute + m.dropsLoss + m.inFlight;
}

std::uint64_t
PacketLedger::Originate(std::size_t flow, NodeId src, NodeId dst, Time at)
{
    PacketRecord r;
    r.packetId = m_records.size();
    r.flow = flow;
    r.src = src;
    r.dst = dst;
    r.sentAt = at;
    r.hopTrace.push_back(src);
    m_records.push_back(std::move(r));
    return m_records.back().packetId;
}

PacketRecord&
PacketLedger::Open(std::uint64_t packetId)
{
    PacketRecord& r = m_records.at(packetId);
    if (r.fate != PacketFate::InFlight)
    {
        throw std::logic_error("packet " + std::to_string(packetId) + " already settled");
    }
    return r;
}

void
PacketLedger::RecordHop(std::uint64_t packetId, NodeId node)
{
    Open(packetId).hopTrace.push_back(node);
}

void
PacketLedger::Deliver(std::uint64_t packetId, Time at)
{
    PacketRecord& r = Open(packetId);
    r.deliveredAt = at;
    r.fate = PacketFate::Delivered;
}

void
PacketLedger::Drop(std::uint64_t packetId, PacketFate cause)
{
    if (cause == PacketFate::InFlight || cause == PacketFate::Delivered)
    {
        throw std::invalid_argument("Drop: not a drop cause");
    }
    Open(packetId).fate = cause;
}

RunMetrics
PacketLedger::Finalize(std::uint64_t controlPackets) const
{
    RunMetrics m;
    m.sent = m_records.size();
    for (const PacketRecord& r : m_records)
    {
        switch (r.fate)
        {
        case PacketFate::InFlight:
            ++m.inFlight;
            break;
        case PacketFate::Delivered:
            ++m.delivered;
            break;
        case PacketFate::DroppedQueue:
            ++m.dropsQueue;
            break;
        case PacketFate::DroppedNoRoute:
            ++m.dropsNoRoute;
            break;
        case PacketFate::DroppedLoss:
            ++m.dropsLoss;
            break;
        }
    }
    m.controlPackets = controlPackets;
    m.pdr = PacketDeliveryRatio(m.delivered, m.sent);
    m.avgDelay = AverageDelay(m_records);
    return m;
}

std::string
ToString(PacketFate fate)
{
    switch (fate)
    {
    case PacketFate::InFlight:
        return "inflight";
    case PacketFate::Delivered:
        return "delivered";
    case PacketFate::DroppedQueue:
        return "drop_queue";
    case PacketFate::DroppedNoRoute:
        return "drop_noroute";
    case PacketFate::DroppedLoss:
        return "drop_loss";
    }
    return "?";
}

std::string
WriteLedger(const std::vector<PacketRecord>& records)
{
    std::string out = "# id flow src dst sent_at delivered_at fate hops\n";
    char buf[160];
    for (const PacketRecord& r : records)
    {
        std::snprintf(buf, sizeof(buf), "%llu %zu %u %u %.6f ", static_cast<unsigned long long>(r.packetId),
                      r.flow, r.src, r.dst, r.sentAt);
        out += buf;
        if (r.deliveredAt)
        {
            std::snprintf(buf, sizeof(buf), "%.6f", *r.deliveredAt);
            out += buf;
        }
        else
        {
            out += "NA";
        }
        out += ' ';
        out += ToString(r.fate);
        out += ' ';
        for (std::size_t i = 0; i < r.hopTrace.size(); ++i)
        {
            out += (i ? "," : "") + std::to_string(r.hopTrace[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace manet
