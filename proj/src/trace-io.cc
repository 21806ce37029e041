#include "manet/trace-io.h"

#include <charconv>
#include <cstdio>
#include <vector>

namespace manet
{

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      m_line(line)
{
}

namespace
{

void
AppendFixed(std::string& out, double v)
{
    char buf[64];
    const int n = std::snprintf(buf, sizeof(buf), "%.6f", v);
    out.append(buf, static_cast<std::size_t>(n));
}

std::vector<std::string_view>
Tokens(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size())
    {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
        {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
        {
            ++j;
        }
        if (j > i)
        {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

double
ParseNumber(std::string_view tok, std::size_t line)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
    {
        throw TraceParseError(line, "malformed number '" + std::string(tok) + "'");
    }
    return v;
}

} // namespace

std::string
WriteTrace(const MobilityTrace& trace)
{
    std::string out = "#area ";
    AppendFixed(out, trace.GetArea().width);
    out += ' ';
    AppendFixed(out, trace.GetArea().height);
    out += " #horizon ";
    AppendFixed(out, trace.Horizon());
    out += '\n';
    for (std::size_t n = 0; n < trace.NodeCount(); ++n)
    {
        out += std::to_string(n);
        for (const Waypoint& w : trace.Waypoints(static_cast<NodeId>(n)))
        {
            out += ' ';
            AppendFixed(out, w.t);
            out += ' ';
            AppendFixed(out, w.x);
            out += ' ';
            AppendFixed(out, w.y);
        }
        out += '\n';
    }
    return out;
}

MobilityTrace
ParseTrace(std::string_view text)
{
    Area area;
    Time horizon = 0.0;
    bool haveHeader = false;
    std::vector<std::vector<Waypoint>> nodes;

    std::size_t lineNo = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
        {
            end = text.size();
        }
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineNo;

        const auto toks = Tokens(line);
        if (toks.empty())
        {
            if (end == text.size())
            {
                break;
            }
            continue;
        }
        if (!haveHeader)
        {
            if (toks.size() != 5 || toks[0] != "#area" || toks[3] != "#horizon")
            {
                throw TraceParseError(lineNo, "expected header '#area <width> <height> #horizon <seconds>'");
            }
            area.width = ParseNumber(toks[1], lineNo);
            area.height = ParseNumber(toks[2], lineNo);
            horizon = ParseNumber(toks[4], lineNo);
            if (!(area.width > 0.0) || !(area.height > 0.0))
            {
                throw TraceParseError(lineNo, "area must have positive width and height");
            }
            if (!(horizon >= 0.0))
            {
                throw TraceParseError(lineNo, "horizon must be non-negative");
            }
            haveHeader = true;
            continue;
        }

        std::uint64_t id = 0;
        auto [ptr, ec] = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), id);
        if (ec != std::errc{} || ptr != toks[0].data() + toks[0].size())
        {
            throw TraceParseError(lineNo, "malformed node id '" + std::string(toks[0]) + "'");
        }
        if (id != nodes.size())
        {
            throw TraceParseError(lineNo, "expected node id " + std::to_string(nodes.size()) + ", got " +
                                              std::to_string(id));
        }
        if ((toks.size() - 1) % 3 != 0 || toks.size() == 1)
        {
            throw TraceParseError(lineNo, "waypoints must be 't x y' triples");
        }
        std::vector<Waypoint> wps;
        for (std::size_t i = 1; i < toks.size(); i += 3)
        {
            Waypoint w{ParseNumber(toks[i], lineNo), ParseNumber(toks[i + 1], lineNo),
                       ParseNumber(toks[i + 2], lineNo)};
            if (wps.empty() && w.t != 0.0)
            {
                throw TraceParseError(lineNo, "first waypoint must be at t = 0");
            }
            if (!wps.empty() && !(w.t > wps.back().t))
            {
                throw TraceParseError(lineNo, "waypoint times must be strictly increasing");
            }
            if (!area.Contains({w.x, w.y}))
            {
                throw TraceParseError(lineNo, "coordinate outside the area");
            }
            wps.push_back(w);
        }
        if (wps.back().t < horizon)
        {
            throw TraceParseError(lineNo, "last waypoint ends before the horizon");
        }
        nodes.push_back(std::move(wps));
    }
    if (!haveHeader)
    {
        throw TraceParseError(lineNo, "missing header");
    }
    return MobilityTrace(area, horizon, std::move(nodes));
}

} // namespace manet
