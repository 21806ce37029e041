#ifndef MANET_METRICS_H
#define MANET_METRICS_H

#include "manet/types.h"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace manet
{

enum class PacketFate
{
    InFlight,
    Delivered,
    DroppedQueue,
    DroppedNoRoute,
    DroppedLoss,
};

struct PacketRecord
{
    std::uint64_t packetId = 0;
    std::size_t flow = 0;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    Time sentAt = 0.0;
    std::optional<Time> deliveredAt;
    std::vector<NodeId> hopTrace;
    PacketFate fate = PacketFate::InFlight;
};

struct RunMetrics
{
    std::uint64_t sent = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropsQueue = 0;
    std::uint64_t dropsNoRoute = 0;
    std::uint64_t dropsLoss = 0;
    std::uint64_t inFlight = 0;
    std::uint64_t controlPackets = 0;
    std::optional<double> pdr;
    std::optional<double> avgDelay;
};

/// delivered / sent; absent when nothing was sent.
std::optional<double> PacketDeliveryRatio(std::uint64_t delivered, std::uint64_t sent);

/// Mean end-to-end delay over delivered packets; absent when none arrived.
std::optional<double> AverageDelay(const std::vector<PacketRecord>& records);
std::optional<double> AverageDelay(const std::vector<double>& delays);

/// sent == delivered + every drop category + still in flight.
bool LedgerCloses(const RunMetrics& m);

/**
 * Per-packet provenance: each data packet's fate is settled at most once and
 * its hop trace grows as it is received along the way.
 */
class PacketLedger
{
  public:
    std::uint64_t Originate(std::size_t flow, NodeId src, NodeId dst, Time at);
    void RecordHop(std::uint64_t packetId, NodeId node);
    void Deliver(std::uint64_t packetId, Time at);
    void Drop(std::uint64_t packetId, PacketFate cause);

    const PacketRecord& Record(std::uint64_t packetId) const { return m_records.at(packetId); }
    const std::vector<PacketRecord>& Records() const { return m_records; }

    /// Counts fates from the records.
    RunMetrics Finalize(std::uint64_t controlPackets) const;

  private:
    PacketRecord& Open(std::uint64_t packetId);

    std::vector<PacketRecord> m_records;
};

/// One line per record: id flow src dst sent delivered fate hops.
std::string WriteLedger(const std::vector<PacketRecord>& records);

std::string ToString(PacketFate fate);

} // namespace manet

#endif // MANET_METRICS_H
