#ifndef MANET_TRACE_IO_H
#define MANET_TRACE_IO_H

#include "manet/mobility.h"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace manet
{

/**
 * Text trace format:
 *
 *   #area <width> <height> #horizon <seconds>
 *   <node_id> <t> <x> <y> <t> <x> <y> ...
 *
 * One line per node, ids 0..n-1 in order, every number printed with six
 * decimals.
 */
class TraceParseError : public std::runtime_error
{
  public:
    TraceParseError(std::size_t line, const std::string& what);

    std::size_t Line() const { return m_line; }

  private:
    std::size_t m_line;
};

std::string WriteTrace(const MobilityTrace& trace);

/// Throws TraceParseError naming the offending line.
MobilityTrace ParseTrace(std::string_view text);

} // namespace manet

#endif // MANET_TRACE_IO_H
