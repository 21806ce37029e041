#ifndef MANET_PACKET_H
#define MANET_PACKET_H

#include "manet/types.h"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace manet
{

using SeqNum = std::uint32_t;

struct DataHeader
{
    std::uint64_t packetId = 0;
    NodeId src = kNoNode;
    NodeId dst = kNoNode;
    // Source's destination sequence number when the packet left.
    SeqNum originSeq = 0;
    // (seq, advertised hop count) of the node that forwarded the packet last.
    NodeId lastForwarder = kNoNode;
    SeqNum lastSeq = 0;
    std::uint32_t lastAdvertised = 0;
};

struct RreqMessage
{
    std::uint32_t rreqId = 0;
    NodeId source = kNoNode;
    NodeId dest = kNoNode;
    SeqNum sourceSeq = 0;
    std::optional<SeqNum> destSeqKnown;
    // Sender's advertised distance to the source (0 when sent by the source).
    std::uint32_t hopCount = 0;
    // Set by the source's neighbour; kNoNode while hopCount == 0.
    NodeId firstHop = kNoNode;
    std::uint32_t ttl = 0;
};

struct RrepMessage
{
    NodeId source = kNoNode;
    NodeId dest = kNoNode;
    SeqNum destSeq = 0;
    // Sender's advertised distance to the destination (0 when sent by it).
    std::uint32_t hopCount = 0;
    // Neighbour of the destination on the advertised path; kNoNode while hopCount == 0.
    NodeId firstHop = kNoNode;
    Time lifetime = 0.0;
};

struct RerrMessage
{
    std::vector<std::pair<NodeId, SeqNum>> unreachable;
};

enum class PacketKind
{
    Data,
    Rreq,
    Rrep,
    Rerr,
};

inline constexpr std::size_t kRreqBytes = 48;
inline constexpr std::size_t kRrepBytes = 44;
inline constexpr std::size_t kRerrBaseBytes = 24;
inline constexpr std::size_t kRerrPerDestBytes = 8;

struct Packet
{
    std::uint64_t uid = 0;
    std::size_t sizeBytes = 0;
    std::variant<DataHeader, RreqMessage, RrepMessage, RerrMessage> body;

    PacketKind Kind() const { return static_cast<PacketKind>(body.index()); }
    bool IsData() const { return body.index() == 0; }
};

} // namespace manet

#endif // MANET_PACKET_H
