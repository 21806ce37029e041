#include "manet/mobility.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace manet
{

double
Distance(Vec2 a, Vec2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

bool
Area::Contains(Vec2 p) const
{
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
}

std::string
ToString(MobilityModel model)
{
    switch (model)
    {
    case MobilityModel::RandomWaypoint:
        return "rwp";
    case MobilityModel::RandomDirection:
        return "rd";
    case MobilityModel::ProbRandomWalk:
        return "prw";
    }
    return "?";
}

MobilityModel
ParseMobilityModel(const std::string& name)
{
    if (name == "rwp")
    {
        return MobilityModel::RandomWaypoint;
    }
    if (name == "rd")
    {
        return MobilityModel::RandomDirection;
    }
    if (name == "prw")
    {
        return MobilityModel::ProbRandomWalk;
    }
    throw std::invalid_argument("unknown mobility model '" + name + "' (expected rwp, rd or prw)");
}

WalkMatrix::WalkMatrix(const Rows& rows)
    : m_rows(rows)
{
    for (int a = 0; a < 3; ++a)
    {
        double sum = 0.0;
        for (int b = 0; b < 3; ++b)
        {
            const double p = rows[a][b];
            if (!(p >= 0.0 && p <= 1.0))
            {
                throw std::invalid_argument("walk matrix entry P(" + std::to_string(a) + "," +
                                            std::to_string(b) + ") outside [0, 1]");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
        {
            throw std::invalid_argument("walk matrix row " + std::to_string(a) +
                                        " does not sum to 1 (sum " + std::to_string(sum) + ")");
        }
    }
}

WalkMatrix
WalkMatrix::Default()
{
    return WalkMatrix(Rows{{{0.0, 0.5, 0.5}, {0.3, 0.7, 0.0}, {0.3, 0.0, 0.7}}});
}

int
WalkChain::Step(const WalkMatrix& matrix, RngStream& rng)
{
    const double u = rng.Uniform();
    double cumulative = 0.0;
    int next = 2;
    for (int b = 0; b < 3; ++b)
    {
        cumulative += matrix(m_state, b);
        if (u < cumulative)
        {
            next = b;
            break;
        }
    }
    // Rounding in the cumulative sum must never select a zero-probability state.
    while (matrix(m_state, next) == 0.0)
    {
        next = (next + 2) % 3;
    }
    m_state = next;
    return m_state;
}

MobilityTrace::MobilityTrace(Area area, Time horizon, std::vector<std::vector<Waypoint>> nodes)
    : m_area(area),
      m_horizon(horizon),
      m_nodes(std::move(nodes))
{
    if (!(area.width > 0.0) || !(area.height > 0.0))
    {
        throw std::invalid_argument("trace area must have positive width and height");
    }
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
    {
        throw std::invalid_argument("trace horizon must be a non-negative finite time");
    }
    for (std::size_t n = 0; n < m_nodes.size(); ++n)
    {
        const auto& wps = m_nodes[n];
        const std::string who = "node " + std::to_string(n) + ": ";
        if (wps.empty())
        {
            throw std::invalid_argument(who + "no waypoints");
        }
        if (wps.front().t != 0.0)
        {
            throw std::invalid_argument(who + "first waypoint must be at t = 0");
        }
        for (std::size_t i = 0; i < wps.size(); ++i)
        {
            if (!area.Contains({wps[i].x, wps[i].y}))
            {
                throw std::invalid_argument(who + "waypoint " + std::to_string(i) + " out of bounds");
            }
            if (i > 0 && !(wps[i].t > wps[i - 1].t))
            {
                throw std::invalid_argument(who + "waypoint times not strictly increasing at index " +
                                            std::to_string(i));
            }
        }
        if (wps.back().t < horizon)
        {
            throw std::invalid_argument(who + "last waypoint ends before the horizon");
        }
    }
}

MobilityTrace
MobilityTrace::Static(Area area, Time horizon, const std::vector<Vec2>& positions)
{
    std::vector<std::vector<Waypoint>> nodes;
    nodes.reserve(positions.size());
    for (const Vec2& p : positions)
    {
        std::vector<Waypoint> wps{{0.0, p.x, p.y}};
        if (horizon > 0.0)
        {
            wps.push_back({horizon, p.x, p.y});
        }
        nodes.push_back(std::move(wps));
    }
    return MobilityTrace(area, horizon, std::move(nodes));
}

Vec2
MobilityTrace::PositionAt(NodeId node, Time t) const
{
    if (node >= m_nodes.size())
    {
        throw std::out_of_range("PositionAt: unknown node " + std::to_string(node));
    }
    if (!(t >= 0.0 && t <= m_horizon))
    {
        throw std::out_of_range("PositionAt: time " + std::to_string(t) + " outside [0, horizon]");
    }
    const auto& wps = m_nodes[node];
    auto it = std::upper_bound(wps.begin(), wps.end(), t,
                               [](Time value, const Waypoint& w) { return value < w.t; });
    // it points past the last waypoint with w.t <= t; wps.front().t == 0 <= t.
    const Waypoint& a = *(it - 1);
    if (a.t == t || it == wps.end())
    {
        return {a.x, a.y};
    }
    const Waypoint& b = *it;
    const double f = (t - a.t) / (b.t - a.t);
    Vec2 p{a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f};
    p.x = std::clamp(p.x, 0.0, m_area.width);
    p.y = std::clamp(p.y, 0.0, m_area.height);
    return p;
}

double
TravelTime(Vec2 from, Vec2 to, double speed)
{
    return Distance(from, to) / speed;
}

BoundaryHit
RayToBoundary(Vec2 pos, Vec2 dir, const Area& area)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    double sx = inf;
    double sy = inf;
    if (dir.x > 0.0)
    {
        sx = (area.width - pos.x) / dir.x;
    }
    else if (dir.x < 0.0)
    {
        sx = -pos.x / dir.x;
    }
    if (dir.y > 0.0)
    {
        sy = (area.height - pos.y) / dir.y;
    }
    else if (dir.y < 0.0)
    {
        sy = -pos.y / dir.y;
    }
    const double s = std::min(sx, sy);
    if (!std::isfinite(s))
    {
        throw std::invalid_argument("RayToBoundary: zero direction");
    }
    Vec2 hit{pos.x + dir.x * s, pos.y + dir.y * s};
    const double cornerTol = 1e-9 * std::max(1.0, s);
    const bool snapX = sx <= sy + cornerTol;
    const bool snapY = sy <= sx + cornerTol;
    if (snapX)
    {
        hit.x = dir.x > 0.0 ? area.width : 0.0;
    }
    if (snapY)
    {
        hit.y = dir.y > 0.0 ? area.height : 0.0;
    }
    hit.x = std::clamp(hit.x, 0.0, area.width);
    hit.y = std::clamp(hit.y, 0.0, area.height);
    return {hit, s};
}

Vec2
DrawInwardHeading(Vec2 pos, const Area& area, RngStream& rng)
{
    std::vector<Vec2> normals;
    if (pos.x == 0.0)
    {
        normals.push_back({1.0, 0.0});
    }
    if (pos.x == area.width)
    {
        normals.push_back({-1.0, 0.0});
    }
    if (pos.y == 0.0)
    {
        normals.push_back({0.0, 1.0});
    }
    if (pos.y == area.height)
    {
        normals.push_back({0.0, -1.0});
    }
    if (normals.empty())
    {
        const double th = rng.Uniform(0.0, 2.0 * std::numbers::pi);
        return {std::cos(th), std::sin(th)};
    }
    const Vec2 n0 = normals.front();
    const Vec2 tangent{-n0.y, n0.x};
    constexpr double eps = 1e-9;
    for (;;)
    {
        const double th = rng.Uniform(0.0, std::numbers::pi);
        const Vec2 dir{std::cos(th) * tangent.x + std::sin(th) * n0.x,
                       std::cos(th) * tangent.y + std::sin(th) * n0.y};
        bool inward = true;
        for (const Vec2& n : normals)
        {
            inward = inward && (dir.x * n.x + dir.y * n.y) > eps;
        }
        if (inward)
        {
            return dir;
        }
    }
}

namespace
{

void
ValidateGeneration(std::size_t nodes, const Area& area, Time horizon, const MobilityParams& params)
{
    if (nodes == 0)
    {
        throw std::invalid_argument("mobility: at least one node required");
    }
    if (!(area.width > 0.0) || !(area.height > 0.0))
    {
        throw std::invalid_argument("mobility: area must have positive width and height");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon))
    {
        throw std::invalid_argument("mobility: horizon must be positive");
    }
    if (!(params.speed > 0.0))
    {
        throw std::invalid_argument("mobility: speed must be positive");
    }
    if (!(params.pause >= 0.0))
    {
        throw std::invalid_argument("mobility: pause must be non-negative");
    }
}

double
DrawSpeed(const MobilityParams& params, RngStream& rng)
{
    if (params.speedMax > params.speed)
    {
        return rng.Uniform(params.speed, params.speedMax);
    }
    return params.speed;
}

Vec2
UniformPoint(const Area& area, RngStream& rng)
{
    const double x = rng.Uniform(0.0, area.width);
    const double y = rng.Uniform(0.0, area.height);
    return {x, y};
}

} // namespace

MobilityTrace
GenerateRandomWaypoint(std::size_t nodes, const Area& area, Time horizon,
                       const MobilityParams& params, std::uint64_t seed)
{
    ValidateGeneration(nodes, area, horizon, params);
    std::vector<std::vector<Waypoint>> all(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
    {
        RngStream rng(seed, StreamKind::Mobility, n);
        auto& wps = all[n];
        Vec2 p = UniformPoint(area, rng);
        Time t = 0.0;
        wps.push_back({t, p.x, p.y});
        while (t < horizon)
        {
            const Vec2 dest = UniformPoint(area, rng);
            const double speed = DrawSpeed(params, rng);
            const Time arrive = t + TravelTime(p, dest, speed);
            if (!(arrive > t))
            {
                continue;
            }
            t = arrive;
            p = dest;
            wps.push_back({t, p.x, p.y});
            if (params.pause > 0.0)
            {
                t += params.pause;
                wps.push_back({t, p.x, p.y});
            }
        }
    }
    return MobilityTrace(area, horizon, std::move(all));
}

MobilityTrace
GenerateRandomDirection(std::size_t nodes, const Area& area, Time horizon,
                        const MobilityParams& params, std::uint64_t seed)
{
    ValidateGeneration(nodes, area, horizon, params);
    std::vector<std::vector<Waypoint>> all(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
    {
        RngStream rng(seed, StreamKind::Mobility, n);
        auto& wps = all[n];
        Vec2 p = UniformPoint(area, rng);
        Time t = 0.0;
        wps.push_back({t, p.x, p.y});
        Vec2 dir = DrawInwardHeading(p, area, rng);
        while (t < horizon)
        {
            const BoundaryHit hit = RayToBoundary(p, dir, area);
            const double speed = DrawSpeed(params, rng);
            const Time arrive = t + hit.distance / speed;
            if (arrive > t)
            {
                t = arrive;
                p = hit.point;
                wps.push_back({t, p.x, p.y});
                if (params.pause > 0.0)
                {
                    t += params.pause;
                    wps.push_back({t, p.x, p.y});
                }
            }
            else
            {
                p = hit.point;
            }
            dir = DrawInwardHeading(p, area, rng);
        }
    }
    return MobilityTrace(area, horizon, std::move(all));
}

namespace
{

double
WalkAxis(double x, int state, double step, double extent)
{
    const double delta = state == 2 ? step : state == 1 ? -step : 0.0;
    const double next = x + delta;
    if (next < 0.0 || next > extent)
    {
        return x - delta;
    }
    return next;
}

} // namespace

MobilityTrace
GenerateProbRandomWalk(std::size_t nodes, const Area& area, Time horizon,
                       const MobilityParams& params, std::uint64_t seed)
{
    ValidateGeneration(nodes, area, horizon, params);
    if (!(params.walkStep > 0.0))
    {
        throw std::invalid_argument("mobility: walk step must be positive");
    }
    const double stepLength = params.speed * params.walkStep;
    if (stepLength > 0.5 * std::min(area.width, area.height))
    {
        throw std::invalid_argument("mobility: walk step length exceeds half the area extent");
    }
    std::vector<std::vector<Waypoint>> all(nodes);
    for (std::size_t n = 0; n < nodes; ++n)
    {
        RngStream rng(seed, StreamKind::Mobility, n);
        auto& wps = all[n];
        Vec2 p = UniformPoint(area, rng);
        wps.push_back({0.0, p.x, p.y});
        WalkChain chainX;
        WalkChain chainY;
        for (std::uint64_t k = 1; wps.back().t < horizon; ++k)
        {
            const int sx = chainX.Step(params.walkMatrix, rng);
            const int sy = chainY.Step(params.walkMatrix, rng);
            p.x = WalkAxis(p.x, sx, stepLength, area.width);
            p.y = WalkAxis(p.y, sy, stepLength, area.height);
            wps.push_back({static_cast<double>(k) * params.walkStep, p.x, p.y});
        }
    }
    return MobilityTrace(area, horizon, std::move(all));
}

MobilityTrace
GenerateTrace(MobilityModel model, std::size_t nodes, const Area& area, Time horizon,
              const MobilityParams& params, std::uint64_t seed)
{
    switch (model)
    {
    case MobilityModel::RandomWaypoint:
        return GenerateRandomWaypoint(nodes, area, horizon, params, seed);
    case MobilityModel::RandomDirection:
        return GenerateRandomDirection(nodes, area, horizon, params, seed);
    case MobilityModel::ProbRandomWalk:
        return GenerateProbRandomWalk(nodes, area, horizon, params, seed);
    }
    throw std::invalid_argument("unknown mobility model");
}

} // namespace manet
