#include "manet/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace manet
{

const char* const kCsvHeader =
    "model,nodes,speed,seed,sent,delivered,pdr,pdr_pct,avg_delay_s,drops_queue,drops_noroute,drops_loss,ctrl_pkts";

namespace
{

std::string
FormatOpt(const std::optional<double>& v, double scale = 1.0)
{
    return v ? FormatFixed(*v * scale) : "NA";
}

std::vector<std::string>
SplitList(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep))
    {
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string() : cur.substr(b, e - b + 1));
    }
    if (!text.empty() && text.back() == sep)
    {
        out.emplace_back();
    }
    return out;
}

std::optional<double>
Mean(const std::vector<double>& v)
{
    if (v.empty())
    {
        return std::nullopt;
    }
    double sum = 0.0;
    for (double x : v)
    {
        sum += x;
    }
    return sum / static_cast<double>(v.size());
}

std::optional<double>
ParseOpt(const std::string& s)
{
    if (s == "NA")
    {
        return std::nullopt;
    }
    return ParseDouble(s);
}

} // namespace

std::string
FormatFixed(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::vector<std::string>
SweepSpec::Validate() const
{
    std::vector<std::string> errors;
    if (models.empty())
    {
        errors.emplace_back("sweep.models must not be empty");
    }
    if (nodes.empty())
    {
        errors.emplace_back("sweep.nodes must not be empty");
    }
    if (speeds.empty())
    {
        errors.emplace_back("sweep.speeds must not be empty");
    }
    if (seeds < 1)
    {
        errors.emplace_back("sweep.seeds must be at least 1");
    }
    return errors;
}

void
ApplySweepEntries(SweepSpec& spec, const std::vector<ConfigFileEntry>& entries)
{
    std::vector<std::string> errors;
    for (const ConfigFileEntry& e : entries)
    {
        const std::string where = "line " + std::to_string(e.line) + ": " + e.section + "." + e.key;
        if (e.section != "sweep")
        {
            errors.push_back(where + ": unknown section");
            continue;
        }
        try
        {
            if (e.key == "models")
            {
                spec.models.clear();
                for (const std::string& m : SplitList(e.value, ','))
                {
                    spec.models.push_back(ParseMobilityModel(m));
                }
            }
            else if (e.key == "nodes")
            {
                spec.nodes.clear();
                for (const std::string& n : SplitList(e.value, ','))
                {
                    spec.nodes.push_back(ParseUnsigned(n));
                }
            }
            else if (e.key == "speeds")
            {
                spec.speeds.clear();
                for (const std::string& s : SplitList(e.value, ','))
                {
                    spec.speeds.push_back(ParseDouble(s));
                }
            }
            else if (e.key == "seeds")
            {
                spec.seeds = ParseUnsigned(e.value);
            }
            else if (e.key == "base_seed")
            {
                spec.baseSeed = ParseUnsigned(e.value);
            }
            else
            {
                errors.push_back(where + ": unknown key");
            }
        }
        catch (const std::invalid_argument& ex)
        {
            errors.push_back(where + ": " + ex.what());
        }
    }
    if (!errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
}

RunRecord
RunScenario(const ScenarioConfig& cfg)
{
    ValidateOrThrow(cfg);
    Simulation sim(cfg);
    const SimulationResult result = sim.Run();
    RunRecord r;
    r.model = cfg.model;
    r.nodes = cfg.nodes;
    r.speed = cfg.mobility.speed;
    r.seed = cfg.seed;
    r.metrics = result.metrics;
    return r;
}

ScenarioConfig
SweepPoint(const ScenarioConfig& base, MobilityModel model, std::size_t nodes, double speed, std::uint64_t seed)
{
    ScenarioConfig cfg = base;
    cfg.model = model;
    cfg.nodes = nodes;
    cfg.mobility.speed = speed;
    cfg.seed = seed;
    return cfg;
}

std::vector<RunRecord>
RunSweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned workers,
         const std::function<void(std::size_t, std::size_t)>& progress)
{
    if (auto errors = spec.Validate(); !errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
    std::vector<ScenarioConfig> points;
    points.reserve(spec.Size());
    for (MobilityModel m : spec.models)
    {
        for (std::size_t n : spec.nodes)
        {
            for (double s : spec.speeds)
            {
                for (std::size_t i = 0; i < spec.seeds; ++i)
                {
                    points.push_back(SweepPoint(base, m, n, s, spec.baseSeed + i));
                }
            }
        }
    }
    // Reject invalid points before any simulation work.
    for (const ScenarioConfig& p : points)
    {
        if (auto errors = p.Validate(); !errors.empty())
        {
            throw ConfigError(std::move(errors));
        }
    }

    std::vector<RunRecord> records(points.size());
    std::vector<std::exception_ptr> failures(points.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::atomic<std::size_t> done{0};
    std::mutex progressMutex;
    auto work = [&] {
        while (!abort)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size())
            {
                return;
            }
            try
            {
                records[i] = RunScenario(points[i]);
            }
            catch (...)
            {
                failures[i] = std::current_exception();
                abort = true;
                return;
            }
            const std::size_t d = ++done;
            if (progress)
            {
                std::lock_guard lock(progressMutex);
                progress(d, points.size());
            }
        }
    };
    workers = std::max(1u, workers);
    if (workers == 1)
    {
        work();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back(work);
        }
        for (std::thread& t : pool)
        {
            t.join();
        }
    }
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        if (failures[i])
        {
            try
            {
                std::rethrow_exception(failures[i]);
            }
            catch (const std::exception& e)
            {
                throw SweepError(std::string("scenario failed: ") + e.what(), PrintConfig(points[i]));
            }
        }
    }
    return records;
}

std::string
CsvRow(const RunRecord& r)
{
    const RunMetrics& m = r.metrics;
    std::string row = ToString(r.model);
    row += ',' + std::to_string(r.nodes);
    row += ',' + FormatFixed(r.speed);
    row += ',' + std::to_string(r.seed);
    row += ',' + std::to_string(m.sent);
    row += ',' + std::to_string(m.delivered);
    row += ',' + FormatOpt(m.pdr);
    row += ',' + FormatOpt(m.pdr, 100.0);
    row += ',' + FormatOpt(m.avgDelay);
    row += ',' + std::to_string(m.dropsQueue);
    row += ',' + std::to_string(m.dropsNoRoute);
    row += ',' + std::to_string(m.dropsLoss);
    row += ',' + std::to_string(m.controlPackets);
    return row;
}

std::string
WriteCsv(const std::vector<RunRecord>& records)
{
    std::string out = kCsvHeader;
    out += '\n';
    for (const RunRecord& r : records)
    {
        out += CsvRow(r);
        out += '\n';
    }
    return out;
}

std::vector<RunRecord>
ParseCsv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineNo = 0;
    std::vector<RunRecord> out;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (lineNo == 1)
        {
            if (line != kCsvHeader)
            {
                throw std::invalid_argument("line 1: unexpected CSV header");
            }
            continue;
        }
        if (line.empty())
        {
            continue;
        }
        const auto f = SplitList(line, ',');
        try
        {
            if (f.size() != 13)
            {
                throw std::invalid_argument("expected 13 columns, got " + std::to_string(f.size()));
            }
            RunRecord r;
            r.model = ParseMobilityModel(f[0]);
            r.nodes = ParseUnsigned(f[1]);
            r.speed = ParseDouble(f[2]);
            r.seed = ParseUnsigned(f[3]);
            r.metrics.sent = ParseUnsigned(f[4]);
            r.metrics.delivered = ParseUnsigned(f[5]);
            r.metrics.pdr = ParseOpt(f[6]);
            r.metrics.avgDelay = ParseOpt(f[8]);
            r.metrics.dropsQueue = ParseUnsigned(f[9]);
            r.metrics.dropsNoRoute = ParseUnsigned(f[10]);
            r.metrics.dropsLoss = ParseUnsigned(f[11]);
            r.metrics.controlPackets = ParseUnsigned(f[12]);
            out.push_back(r);
        }
        catch (const std::invalid_argument& e)
        {
            throw std::invalid_argument("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    if (lineNo == 0)
    {
        throw std::invalid_argument("empty CSV");
    }
    return out;
}

std::vector<SummaryRow>
Summarize(const std::vector<RunRecord>& records)
{
    using Key = std::tuple<MobilityModel, std::size_t, double>;
    std::vector<Key> order;
    std::map<Key, std::vector<const RunRecord*>> groups;
    for (const RunRecord& r : records)
    {
        Key k{r.model, r.nodes, r.speed};
        auto [it, fresh] = groups.try_emplace(k);
        if (fresh)
        {
            order.push_back(k);
        }
        it->second.push_back(&r);
    }
    std::vector<SummaryRow> rows;
    for (const Key& k : order)
    {
        const auto& g = groups[k];
        SummaryRow row{std::get<0>(k), std::get<1>(k), std::get<2>(k), 0, {}, {}, {}};
        row.runs = g.size();
        std::vector<double> pdrs;
        std::vector<double> delays;
        for (const RunRecord* r : g)
        {
            if (r->metrics.pdr)
            {
                pdrs.push_back(*r->metrics.pdr);
            }
            if (r->metrics.avgDelay)
            {
                delays.push_back(*r->metrics.avgDelay);
            }
        }
        row.meanPdr = Mean(pdrs);
        row.meanDelay = Mean(delays);
        if (pdrs.size() >= 2)
        {
            double ss = 0.0;
            for (double p : pdrs)
            {
                ss += (p - *row.meanPdr) * (p - *row.meanPdr);
            }
            const double sd = std::sqrt(ss / static_cast<double>(pdrs.size() - 1));
            row.pdrStdErr = sd / std::sqrt(static_cast<double>(pdrs.size()));
        }
        rows.push_back(row);
    }
    return rows;
}

std::string
WriteSummaryCsv(const std::vector<SummaryRow>& rows)
{
    std::string out = "model,nodes,speed,runs,mean_pdr,mean_pdr_pct,pdr_stderr,mean_delay_s\n";
    for (const SummaryRow& r : rows)
    {
        out += ToString(r.model) + ',' + std::to_string(r.nodes) + ',' + FormatFixed(r.speed) + ',' +
               std::to_string(r.runs) + ',' + FormatOpt(r.meanPdr) + ',' + FormatOpt(r.meanPdr, 100.0) + ',' +
               FormatOpt(r.pdrStdErr) + ',' + FormatOpt(r.meanDelay) + '\n';
    }
    return out;
}

std::optional<double>
FigureTable::Max() const
{
    std::optional<double> best;
    for (const auto& row : cells)
    {
        for (const auto& c : row)
        {
            if (c && (!best || *c > *best))
            {
                best = c;
            }
        }
    }
    return best;
}

std::vector<FigureTable>
MakeFigureTables(const std::vector<RunRecord>& records, const SweepSpec& spec)
{
    const auto summary = Summarize(records);
    std::vector<FigureTable> tables;
    for (MobilityModel m : spec.models)
    {
        for (const char* metric : {"pdr", "delay"})
        {
            FigureTable t{m, metric, spec.nodes, spec.speeds, {}, {}};
            for (std::size_t n : spec.nodes)
            {
                std::vector<std::optional<double>> row;
                for (double s : spec.speeds)
                {
                    std::optional<double> v;
                    for (const SummaryRow& r : summary)
                    {
                        if (r.model == m && r.nodes == n && r.speed == s)
                        {
                            v = t.metric == "pdr" ? r.meanPdr : r.meanDelay;
                        }
                    }
                    if (!v)
                    {
                        t.missing.push_back("nodes=" + std::to_string(n) + " speed=" + FormatFixed(s));
                    }
                    row.push_back(v);
                }
                t.cells.push_back(std::move(row));
            }
            tables.push_back(std::move(t));
        }
    }
    return tables;
}

std::string
WriteFigureTables(const std::vector<FigureTable>& tables)
{
    std::string out;
    for (const FigureTable& t : tables)
    {
        out += "# " + ToString(t.model) + ' ' + t.metric + '\n';
        out += "nodes";
        for (double s : t.speeds)
        {
            out += ',' + FormatFixed(s);
        }
        out += '\n';
        for (std::size_t i = 0; i < t.nodes.size(); ++i)
        {
            out += std::to_string(t.nodes[i]);
            for (const auto& c : t.cells[i])
            {
                out += ',' + FormatOpt(c);
            }
            out += '\n';
        }
        for (const std::string& m : t.missing)
        {
            out += "# missing " + m + '\n';
        }
        out += '\n';
    }
    return out;
}

} // namespace manet
