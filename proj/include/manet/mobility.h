#ifndef MANET_MOBILITY_H
#define MANET_MOBILITY_H

#include "manet/rng.h"
#include "manet/types.h"

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace manet
{

struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

double Distance(Vec2 a, Vec2 b);

struct Area
{
    double width = 1000.0;
    double height = 1000.0;

    bool Contains(Vec2 p) const;
    bool operator==(const Area&) const = default;
};

struct Waypoint
{
    Time t = 0.0;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Waypoint&) const = default;
};

enum class MobilityModel
{
    RandomWaypoint,
    RandomDirection,
    ProbRandomWalk,
};

/// Short names used on the command line and in CSV output: rwp, rd, prw.
std::string ToString(MobilityModel model);
MobilityModel ParseMobilityModel(const std::string& name);

/**
 * Per-axis transition matrix of the probabilistic random walk. States are
 * 0 = stay, 1 = move backward, 2 = move forward; row a holds P(a, .).
 */
class WalkMatrix
{
  public:
    using Rows = std::array<std::array<double, 3>, 3>;

    /// Throws std::invalid_argument unless every row is stochastic.
    explicit WalkMatrix(const Rows& rows);

    /// Rows {0, .5, .5}, {.3, .7, 0}, {.3, 0, .7}.
    static WalkMatrix Default();

    double operator()(int from, int to) const { return m_rows[from][to]; }
    const Rows& GetRows() const { return m_rows; }
    bool operator==(const WalkMatrix&) const = default;

  private:
    Rows m_rows;
};

/// Three-state Markov chain sampled against a WalkMatrix.
class WalkChain
{
  public:
    explicit WalkChain(int initial = 0)
        : m_state(initial)
    {
    }

    int Step(const WalkMatrix& matrix, RngStream& rng);
    int State() const { return m_state; }

  private:
    int m_state;
};

struct MobilityParams
{
    double speed = 10.0;
    // Upper end of a per-leg uniform speed draw; <= speed means constant speed.
    double speedMax = 0.0;
    double pause = 0.0;
    double walkStep = 1.0;
    WalkMatrix walkMatrix = WalkMatrix::Default();
};

/**
 * Piecewise-linear movement schedule for every node. Each node's list starts
 * at t = 0, is strictly increasing in time, ends at or after the horizon, and
 * stays inside the area. Immutable after construction.
 */
class MobilityTrace
{
  public:
    /// Throws std::invalid_argument when any invariant is violated.
    MobilityTrace(Area area, Time horizon, std::vector<std::vector<Waypoint>> nodes);

    /// Nodes that never move.
    static MobilityTrace Static(Area area, Time horizon, const std::vector<Vec2>& positions);

    std::size_t NodeCount() const { return m_nodes.size(); }
    const Area& GetArea() const { return m_area; }
    Time Horizon() const { return m_horizon; }
    const std::vector<Waypoint>& Waypoints(NodeId node) const { return m_nodes.at(node); }

    /// Linear interpolation between bracketing waypoints. Throws std::out_of_range
    /// for t outside [0, horizon] or an unknown node.
    Vec2 PositionAt(NodeId node, Time t) const;

    bool operator==(const MobilityTrace&) const = default;

  private:
    Area m_area;
    Time m_horizon;
    std::vector<std::vector<Waypoint>> m_nodes;
};

double TravelTime(Vec2 from, Vec2 to, double speed);

struct BoundaryHit
{
    Vec2 point;
    double distance;
};

/// Where a ray from an interior or boundary point leaves the area. `dir` must
/// be a unit vector pointing into (or along) the area.
BoundaryHit RayToBoundary(Vec2 pos, Vec2 dir, const Area& area);

/// Unit heading leaving a boundary point: 0-180 degrees off the wall, so it
/// always points inward. At corners the draw repeats until it clears both walls.
Vec2 DrawInwardHeading(Vec2 pos, const Area& area, RngStream& rng);

MobilityTrace GenerateRandomWaypoint(std::size_t nodes, const Area& area, Time horizon,
                                     const MobilityParams& params, std::uint64_t seed);

MobilityTrace GenerateRandomDirection(std::size_t nodes, const Area& area, Time horizon,
                                      const MobilityParams& params, std::uint64_t seed);

MobilityTrace GenerateProbRandomWalk(std::size_t nodes, const Area& area, Time horizon,
                                     const MobilityParams& params, std::uint64_t seed);

MobilityTrace GenerateTrace(MobilityModel model, std::size_t nodes, const Area& area,
                            Time horizon, const MobilityParams& params, std::uint64_t seed);

} // namespace manet

#endif // MANET_MOBILITY_H
