#ifndef MANET_TYPES_H
#define MANET_TYPES_H

#include <cstdint>

namespace manet
{

// Simulation time in seconds.
using Time = double;

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = 0xffffffffu;

} // namespace manet

#endif // MANET_TYPES_H
