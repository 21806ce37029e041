// Independent reference computations used by the tests. Deliberately naive:
// nothing here shares code with the simulator beyond plain data types.

#ifndef MANET_TESTS_ORACLES_H
#define MANET_TESTS_ORACLES_H

#include "manet/mobility.h"
#include "manet/rng.h"
#include "manet/scenario-config.h"
#include "manet/simulation.h"

#include <array>
#include <cmath>
#include <deque>
#include <optional>
#include <vector>

namespace oracle
{

inline bool
InDisk(manet::Vec2 a, manet::Vec2 b, double range)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy) <= range;
}

/// Hop distance from src to every node on the unit-disk graph; -1 if unreachable.
inline std::vector<int>
BfsHops(const std::vector<manet::Vec2>& pos, double range, std::size_t src)
{
    std::vector<int> dist(pos.size(), -1);
    std::deque<std::size_t> q{src};
    dist[src] = 0;
    while (!q.empty())
    {
        const std::size_t u = q.front();
        q.pop_front();
        for (std::size_t v = 0; v < pos.size(); ++v)
        {
            if (dist[v] < 0 && v != u && InDisk(pos[u], pos[v], range))
            {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    return dist;
}

inline bool
Connected(const std::vector<manet::Vec2>& pos, double range)
{
    for (int d : BfsHops(pos, range, 0))
    {
        if (d < 0)
        {
            return false;
        }
    }
    return true;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline Matrix3
Multiply(const Matrix3& a, const Matrix3& b)
{
    Matrix3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                c[i][j] += a[i][k] * b[k][j];
    return c;
}

/// Row 0 of P^(2^40): the chain's long-run state distribution.
inline std::array<double, 3>
StationaryByMatrixPower(const Matrix3& p)
{
    Matrix3 m = p;
    for (int i = 0; i < 40; ++i)
    {
        m = Multiply(m, m);
    }
    return m[0];
}

/// Uniform positions redrawn until the unit-disk graph is connected.
inline std::vector<manet::Vec2>
ConnectedTopology(std::size_t n, const manet::Area& area, double range, manet::RngStream& rng)
{
    for (;;)
    {
        std::vector<manet::Vec2> pos(n);
        for (auto& p : pos)
        {
            p = {rng.Uniform(0.0, area.width), rng.Uniform(0.0, area.height)};
        }
        if (Connected(pos, range))
        {
            return pos;
        }
    }
}

/// Scenario over fixed positions; traffic must be supplied as explicit flows.
inline manet::ScenarioConfig
StaticConfig(std::size_t n, manet::Time horizon, const manet::Area& area = {})
{
    manet::ScenarioConfig cfg;
    cfg.nodes = n;
    cfg.area = area;
    cfg.horizon = horizon;
    cfg.traffic.flows = 0;
    return cfg;
}

inline manet::SimulationOptions
StaticOptions(const manet::ScenarioConfig& cfg, const std::vector<manet::Vec2>& pos,
              std::vector<manet::Flow> flows)
{
    manet::SimulationOptions opts;
    opts.trace = manet::MobilityTrace::Static(cfg.area, cfg.horizon, pos);
    opts.flows = std::move(flows);
    return opts;
}

inline manet::Flow
Cbr(manet::NodeId src, manet::NodeId dst, manet::Time start, manet::Time stop, double rate = 4.0,
    std::size_t size = 512)
{
    return manet::Flow{src, dst, rate, size, start, stop};
}

} // namespace oracle

#endif // MANET_TESTS_ORACLES_H
