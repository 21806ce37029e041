#include "manet/scenario-config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace manet
{

namespace
{

std::string
Join(const std::vector<std::string>& errors)
{
    std::string out = "invalid configuration";
    for (const std::string& e : errors)
    {
        out += "\n  " + e;
    }
    return out;
}

std::string
Trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string
FormatMatrix(const WalkMatrix& m)
{
    std::string out;
    for (int r = 0; r < 3; ++r)
    {
        for (int c = 0; c < 3; ++c)
        {
            out += FormatDouble(m(r, c));
            out += c < 2 ? "," : (r < 2 ? ";" : "");
        }
    }
    return out;
}

WalkMatrix
ParseMatrix(const std::string& text)
{
    WalkMatrix::Rows rows{};
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : text)
    {
        if (ch == ',' || ch == ';')
        {
            cells.push_back(Trim(cell));
            cell.clear();
        }
        else
        {
            cell += ch;
        }
    }
    cells.push_back(Trim(cell));
    if (cells.size() != 9)
    {
        throw std::invalid_argument("expected 9 entries (rows separated by ';'), got " +
                                    std::to_string(cells.size()));
    }
    for (int i = 0; i < 9; ++i)
    {
        rows[i / 3][i % 3] = ParseDouble(cells[i]);
    }
    return WalkMatrix(rows);
}

struct Field
{
    const char* name;
    std::function<void(ScenarioConfig&, const std::string&)> set;
    std::function<std::string(const ScenarioConfig&)> get;
};

template <typename T>
Field
Real(const char* name, T ScenarioConfig::*group, double T::*member)
{
    return {name, [=](ScenarioConfig& c, const std::string& v) { (c.*group).*member = ParseDouble(v); },
            [=](const ScenarioConfig& c) { return FormatDouble((c.*group).*member); }};
}

template <typename T, typename U>
Field
Count(const char* name, T ScenarioConfig::*group, U T::*member)
{
    return {name,
            [=](ScenarioConfig& c, const std::string& v) {
                const std::uint64_t n = ParseUnsigned(v);
                if (n > std::numeric_limits<U>::max())
                {
                    throw std::invalid_argument("value out of range");
                }
                (c.*group).*member = static_cast<U>(n);
            },
            [=](const ScenarioConfig& c) { return std::to_string((c.*group).*member); }};
}

const std::vector<Field>&
Fields()
{
    static const std::vector<Field> fields = [] {
        std::vector<Field> f;
        f.push_back({"scenario.nodes",
                     [](ScenarioConfig& c, const std::string& v) { c.nodes = ParseUnsigned(v); },
                     [](const ScenarioConfig& c) { return std::to_string(c.nodes); }});
        f.push_back({"scenario.model",
                     [](ScenarioConfig& c, const std::string& v) { c.model = ParseMobilityModel(v); },
                     [](const ScenarioConfig& c) { return ToString(c.model); }});
        f.push_back({"scenario.seed",
                     [](ScenarioConfig& c, const std::string& v) { c.seed = ParseUnsigned(v); },
                     [](const ScenarioConfig& c) { return std::to_string(c.seed); }});
        f.push_back({"scenario.horizon",
                     [](ScenarioConfig& c, const std::string& v) { c.horizon = ParseDouble(v); },
                     [](const ScenarioConfig& c) { return FormatDouble(c.horizon); }});
        f.push_back(Real("scenario.area_width", &ScenarioConfig::area, &Area::width));
        f.push_back(Real("scenario.area_height", &ScenarioConfig::area, &Area::height));

        f.push_back(Real("mobility.speed", &ScenarioConfig::mobility, &MobilityParams::speed));
        f.push_back(Real("mobility.speed_max", &ScenarioConfig::mobility, &MobilityParams::speedMax));
        f.push_back(Real("mobility.pause", &ScenarioConfig::mobility, &MobilityParams::pause));
        f.push_back(Real("mobility.walk_step", &ScenarioConfig::mobility, &MobilityParams::walkStep));
        f.push_back({"mobility.walk_matrix",
                     [](ScenarioConfig& c, const std::string& v) { c.mobility.walkMatrix = ParseMatrix(v); },
                     [](const ScenarioConfig& c) { return FormatMatrix(c.mobility.walkMatrix); }});

        f.push_back(Real("radio.range", &ScenarioConfig::radio, &RadioConfig::range));
        f.push_back(Real("radio.bandwidth", &ScenarioConfig::radio, &RadioConfig::bandwidth));
        f.push_back(Count("radio.queue_capacity", &ScenarioConfig::radio, &RadioConfig::queueCapacity));
        f.push_back(Real("radio.jitter_max", &ScenarioConfig::radio, &RadioConfig::jitterMax));
        f.push_back(Real("radio.loss_prob", &ScenarioConfig::radio, &RadioConfig::lossProb));

        f.push_back(Count("traffic.flows", &ScenarioConfig::traffic, &TrafficConfig::flows));
        f.push_back(Real("traffic.rate", &ScenarioConfig::traffic, &TrafficConfig::rate));
        f.push_back(Count("traffic.packet_size", &ScenarioConfig::traffic, &TrafficConfig::packetSize));
        f.push_back(Real("traffic.start", &ScenarioConfig::traffic, &TrafficConfig::start));
        f.push_back(Real("traffic.stop", &ScenarioConfig::traffic, &TrafficConfig::stop));

        using aomdv::AomdvConfig;
        f.push_back(Count("aomdv.k_replies", &ScenarioConfig::aomdv, &AomdvConfig::kReplies));
        f.push_back(Count("aomdv.max_paths", &ScenarioConfig::aomdv, &AomdvConfig::maxPaths));
        f.push_back(Real("aomdv.active_route_lifetime", &ScenarioConfig::aomdv, &AomdvConfig::activeRouteLifetime));
        f.push_back(Count("aomdv.rreq_retries", &ScenarioConfig::aomdv, &AomdvConfig::rreqRetries));
        f.push_back(Real("aomdv.path_discovery_window", &ScenarioConfig::aomdv, &AomdvConfig::pathDiscoveryWindow));
        f.push_back(Count("aomdv.ttl", &ScenarioConfig::aomdv, &AomdvConfig::ttl));
        f.push_back(Real("aomdv.net_traversal_time", &ScenarioConfig::aomdv, &AomdvConfig::netTraversalTime));
        f.push_back({"aomdv.intermediate_replies",
                     [](ScenarioConfig& c, const std::string& v) { c.aomdv.intermediateReplies = ParseBool(v); },
                     [](const ScenarioConfig& c) { return std::string(c.aomdv.intermediateReplies ? "true" : "false"); }});
        f.push_back(Real("aomdv.purge_interval", &ScenarioConfig::aomdv, &AomdvConfig::purgeInterval));
        return f;
    }();
    return fields;
}

const Field*
FindField(const std::string& key)
{
    for (const Field& f : Fields())
    {
        if (key == f.name)
        {
            return &f;
        }
    }
    return nullptr;
}

bool
OwnedSection(const std::string& s)
{
    return s == "scenario" || s == "mobility" || s == "radio" || s == "traffic" || s == "aomdv";
}

template <typename Fn>
void
Collect(std::vector<std::string>& errors, Fn&& fn)
{
    try
    {
        fn();
    }
    catch (const std::invalid_argument& e)
    {
        errors.emplace_back(e.what());
    }
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(Join(errors)),
      m_errors(std::move(errors))
{
}

std::string
FormatDouble(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double
ParseDouble(const std::string& text)
{
    const std::string t = Trim(text);
    double v = 0.0;
    const char* first = t.data();
    if (!t.empty() && t[0] == '+')
    {
        ++first;
    }
    auto res = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return v;
}

std::uint64_t
ParseUnsigned(const std::string& text)
{
    const std::string t = Trim(text);
    std::uint64_t v = 0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    {
        throw std::invalid_argument("not a non-negative integer: '" + text + "'");
    }
    return v;
}

bool
ParseBool(const std::string& text)
{
    const std::string t = Trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on")
    {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off")
    {
        return false;
    }
    throw std::invalid_argument("not a boolean: '" + text + "'");
}

std::vector<std::string>
ScenarioConfig::Validate() const
{
    std::vector<std::string> errors;
    if (nodes < 1)
    {
        errors.emplace_back("scenario.nodes must be at least 1");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon))
    {
        errors.emplace_back("scenario.horizon must be positive and finite");
    }
    if (!(area.width > 0.0) || !std::isfinite(area.width))
    {
        errors.emplace_back("scenario.area_width must be positive and finite");
    }
    if (!(area.height > 0.0) || !std::isfinite(area.height))
    {
        errors.emplace_back("scenario.area_height must be positive and finite");
    }
    if (!(mobility.speed > 0.0) || !std::isfinite(mobility.speed))
    {
        errors.emplace_back("mobility.speed must be positive");
    }
    if (mobility.speedMax != 0.0 && !(mobility.speedMax >= mobility.speed))
    {
        errors.emplace_back("mobility.speed_max must be 0 (constant speed) or at least mobility.speed");
    }
    if (!(mobility.pause >= 0.0))
    {
        errors.emplace_back("mobility.pause must be non-negative");
    }
    if (!(mobility.walkStep > 0.0))
    {
        errors.emplace_back("mobility.walk_step must be positive");
    }
    else if (model == MobilityModel::ProbRandomWalk &&
             mobility.speed * mobility.walkStep > std::min(area.width, area.height) / 2.0)
    {
        errors.emplace_back("mobility.speed * mobility.walk_step must not exceed half the smaller area side");
    }
    Collect(errors, [&] { radio.Validate(); });
    Collect(errors, [&] { aomdv.Validate(); });
    if (traffic.flows > 0)
    {
        Collect(errors, [&] { traffic.Validate(horizon); });
        const std::uint64_t pairs = nodes < 2 ? 0 : static_cast<std::uint64_t>(nodes) * (nodes - 1);
        if (traffic.flows > pairs)
        {
            errors.emplace_back("traffic.flows (" + std::to_string(traffic.flows) + ") exceeds the " +
                                std::to_string(pairs) + " distinct source-destination pairs");
        }
    }
    return errors;
}

void
ValidateOrThrow(const ScenarioConfig& cfg)
{
    auto errors = cfg.Validate();
    if (!errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
}

std::vector<std::string>
ConfigKeys()
{
    std::vector<std::string> keys;
    for (const Field& f : Fields())
    {
        keys.emplace_back(f.name);
    }
    return keys;
}

void
SetField(ScenarioConfig& cfg, const std::string& key, const std::string& value)
{
    const Field* f = FindField(key);
    if (f == nullptr)
    {
        throw ConfigError({"unknown configuration key '" + key + "'"});
    }
    try
    {
        f->set(cfg, value);
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError({key + ": " + e.what()});
    }
}

std::string
GetField(const ScenarioConfig& cfg, const std::string& key)
{
    const Field* f = FindField(key);
    if (f == nullptr)
    {
        throw ConfigError({"unknown configuration key '" + key + "'"});
    }
    return f->get(cfg);
}

std::vector<ConfigFileEntry>
ParseConfigText(const std::string& text)
{
    std::vector<ConfigFileEntry> entries;
    std::vector<std::string> errors;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::size_t lineNo = 0;
    while (std::getline(in, raw))
    {
        ++lineNo;
        const std::string line = Trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';')
        {
            continue;
        }
        if (line.front() == '[')
        {
            if (line.back() != ']' || line.size() < 3)
            {
                errors.push_back("line " + std::to_string(lineNo) + ": malformed section header");
                continue;
            }
            section = Trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            errors.push_back("line " + std::to_string(lineNo) + ": expected 'key = value'");
            continue;
        }
        if (section.empty())
        {
            errors.push_back("line " + std::to_string(lineNo) + ": key outside any [section]");
            continue;
        }
        entries.push_back({section, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), lineNo});
    }
    if (!errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
    return entries;
}

std::vector<ConfigFileEntry>
ApplyConfigEntries(ScenarioConfig& cfg, const std::vector<ConfigFileEntry>& entries)
{
    std::vector<ConfigFileEntry> rest;
    std::vector<std::string> errors;
    for (const ConfigFileEntry& e : entries)
    {
        if (!OwnedSection(e.section))
        {
            rest.push_back(e);
            continue;
        }
        try
        {
            SetField(cfg, e.section + "." + e.key, e.value);
        }
        catch (const ConfigError& err)
        {
            for (const std::string& msg : err.Errors())
            {
                errors.push_back("line " + std::to_string(e.line) + ": " + msg);
            }
        }
    }
    if (!errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
    return rest;
}

std::string
PrintConfig(const ScenarioConfig& cfg)
{
    std::string out;
    std::string section;
    for (const Field& f : Fields())
    {
        const std::string name = f.name;
        const auto dot = name.find('.');
        const std::string s = name.substr(0, dot);
        if (s != section)
        {
            out += (section.empty() ? "[" : "\n[") + s + "]\n";
            section = s;
        }
        out += name.substr(dot + 1) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

} // namespace manet
