// manetsim: command-line front end for single runs, sweeps, figure tables and
// mobility-only trace generation.
//
// Exit status: 0 success, 1 invalid configuration, 2 runtime failure.

#include "manet/experiment.h"
#include "manet/scenario-config.h"
#include "manet/simulation.h"
#include "manet/trace-io.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace manet;

namespace
{

constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct Overrides
{
    std::string configPath;
    std::vector<std::string> sets;
    std::optional<std::size_t> nodes;
    std::optional<double> speed;
    std::optional<std::string> model;
    std::optional<std::uint64_t> seed;
    std::optional<double> pause;
    std::optional<std::size_t> flows;
    std::optional<double> rate;
    std::optional<std::size_t> pktSize;
    std::optional<double> range;
    std::optional<double> bandwidth;
    std::optional<std::size_t> kReplies;
    std::optional<std::size_t> maxPaths;
    std::optional<double> horizon;
    std::optional<double> loss;
    std::optional<double> jitter;
    bool printConfig = false;
};

void
AddScenarioFlags(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.configPath, "Configuration file ([section] key = value)");
    cmd->add_option("--set", o.sets, "Override any field: section.key=value (repeatable)");
    cmd->add_option("--nodes", o.nodes, "Number of nodes");
    cmd->add_option("--speed", o.speed, "Node speed (m/s)");
    cmd->add_option("--model", o.model, "Mobility model")->check(CLI::IsMember({"rwp", "rd", "prw"}));
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--pause", o.pause, "Pause time (s)");
    cmd->add_option("--flows", o.flows, "Number of CBR flows");
    cmd->add_option("--rate", o.rate, "Packets per second per flow");
    cmd->add_option("--pkt-size", o.pktSize, "Data packet size (bytes)");
    cmd->add_option("--range", o.range, "Radio range (m)");
    cmd->add_option("--bandwidth", o.bandwidth, "Link bandwidth (bit/s)");
    cmd->add_option("--k-replies", o.kReplies, "Destination reply copies per RREQ");
    cmd->add_option("--max-paths", o.maxPaths, "Paths stored per destination");
    cmd->add_option("--horizon", o.horizon, "Simulation horizon (s)");
    cmd->add_option("--loss", o.loss, "Per-reception loss probability");
    cmd->add_option("--jitter", o.jitter, "Maximum MAC jitter (s)");
    cmd->add_flag("--print-config", o.printConfig, "Print the resolved configuration and exit");
}

std::string
ReadFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError({"cannot read '" + path + "'"});
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void
WriteOut(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
    {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    out << text;
    if (!out)
    {
        throw std::runtime_error("cannot write '" + path + "'");
    }
}

/// File first, then --set, then the dedicated flags. Returns the entries the
/// scenario did not consume.
std::vector<ConfigFileEntry>
Resolve(const Overrides& o, ScenarioConfig& cfg)
{
    std::vector<ConfigFileEntry> rest;
    if (!o.configPath.empty())
    {
        rest = ApplyConfigEntries(cfg, ParseConfigText(ReadFile(o.configPath)));
    }
    for (const std::string& s : o.sets)
    {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError({"--set expects section.key=value, got '" + s + "'"});
        }
        SetField(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (o.nodes)
        cfg.nodes = *o.nodes;
    if (o.speed)
        cfg.mobility.speed = *o.speed;
    if (o.model)
        cfg.model = ParseMobilityModel(*o.model);
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.pause)
        cfg.mobility.pause = *o.pause;
    if (o.flows)
        cfg.traffic.flows = *o.flows;
    if (o.rate)
        cfg.traffic.rate = *o.rate;
    if (o.pktSize)
        cfg.traffic.packetSize = *o.pktSize;
    if (o.range)
        cfg.radio.range = *o.range;
    if (o.bandwidth)
        cfg.radio.bandwidth = *o.bandwidth;
    if (o.kReplies)
        cfg.aomdv.kReplies = *o.kReplies;
    if (o.maxPaths)
        cfg.aomdv.maxPaths = *o.maxPaths;
    if (o.horizon)
        cfg.horizon = *o.horizon;
    if (o.loss)
        cfg.radio.lossProb = *o.loss;
    if (o.jitter)
        cfg.radio.jitterMax = *o.jitter;
    return rest;
}

/// A horizon shorter than the default traffic window pulls traffic.stop in.
void
FitTrafficWindow(ScenarioConfig& cfg, const Overrides& o)
{
    if (o.horizon && cfg.traffic.stop > cfg.horizon)
    {
        cfg.traffic.stop = cfg.horizon;
    }
}

struct SweepFlags
{
    std::string models;
    std::string nodeList;
    std::string speeds;
    std::optional<std::size_t> seeds;
    std::optional<std::uint64_t> baseSeed;
};

void
AddSweepFlags(CLI::App* cmd, SweepFlags& s)
{
    cmd->add_option("--models", s.models, "Comma-separated models (default rwp,rd,prw)");
    cmd->add_option("--node-list", s.nodeList, "Comma-separated node counts (default 10,...,100)");
    cmd->add_option("--speeds", s.speeds, "Comma-separated speeds (default 10,20,30,40)");
    cmd->add_option("--seeds", s.seeds, "Seeds per point (default 10)");
    cmd->add_option("--base-seed", s.baseSeed, "First seed of every point (default 1)");
}

SweepSpec
ResolveSweep(const std::vector<ConfigFileEntry>& rest, const SweepFlags& f)
{
    SweepSpec spec;
    ApplySweepEntries(spec, rest);
    std::vector<ConfigFileEntry> extra;
    if (!f.models.empty())
        extra.push_back({"sweep", "models", f.models, 0});
    if (!f.nodeList.empty())
        extra.push_back({"sweep", "nodes", f.nodeList, 0});
    if (!f.speeds.empty())
        extra.push_back({"sweep", "speeds", f.speeds, 0});
    if (f.seeds)
        extra.push_back({"sweep", "seeds", std::to_string(*f.seeds), 0});
    if (f.baseSeed)
        extra.push_back({"sweep", "base_seed", std::to_string(*f.baseSeed), 0});
    ApplySweepEntries(spec, extra);
    if (auto errors = spec.Validate(); !errors.empty())
    {
        throw ConfigError(std::move(errors));
    }
    return spec;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Discrete-event MANET simulator with AOMDV routing"};
    app.require_subcommand(1);

    Overrides runOpts;
    std::string runOut;
    std::string eventLogPath;
    std::string ledgerPath;
    std::string tracePath;
    auto* run = app.add_subcommand("run", "Simulate a single scenario and print its CSV row");
    AddScenarioFlags(run, runOpts);
    run->add_option("--out", runOut, "CSV output path (default stdout)");
    run->add_option("--event-log", eventLogPath, "Write the per-run event log here");
    run->add_option("--ledger", ledgerPath, "Write the per-packet ledger here");
    run->add_option("--trace", tracePath, "Use this mobility trace instead of generating one");

    Overrides sweepOpts;
    SweepFlags sweepFlags;
    std::string sweepOut;
    std::string summaryOut;
    unsigned workers = 1;
    auto* sweep = app.add_subcommand("sweep", "Run the model x nodes x speed x seed matrix");
    AddScenarioFlags(sweep, sweepOpts);
    AddSweepFlags(sweep, sweepFlags);
    sweep->add_option("--out", sweepOut, "CSV output path (default stdout)");
    sweep->add_option("--summary", summaryOut, "Write per-point seed means here");
    sweep->add_option("--workers", workers, "Scenarios run concurrently")->check(CLI::PositiveNumber);

    std::string figIn;
    std::string figOut;
    std::string figConfig;
    SweepFlags figFlags;
    auto* figures = app.add_subcommand("figures", "Summarize a sweep CSV into PDR and delay tables");
    figures->add_option("--in", figIn, "Sweep CSV")->required();
    figures->add_option("--out", figOut, "Output path (default stdout)");
    figures->add_option("--config", figConfig, "Configuration file supplying [sweep]");
    AddSweepFlags(figures, figFlags);

    Overrides genOpts;
    std::string genOut;
    auto* gen = app.add_subcommand("gen-trace", "Generate a mobility trace only");
    AddScenarioFlags(gen, genOpts);
    gen->add_option("--out", genOut, "Trace output path (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitInvalid;
    }

    ScenarioConfig cfg;
    try
    {
        if (*run)
        {
            Resolve(runOpts, cfg);
            FitTrafficWindow(cfg, runOpts);
            if (runOpts.printConfig)
            {
                std::cout << PrintConfig(cfg);
                return 0;
            }
            ValidateOrThrow(cfg);
            SimulationOptions opts;
            opts.eventLog = !eventLogPath.empty();
            if (!tracePath.empty())
            {
                opts.trace = ParseTrace(ReadFile(tracePath));
            }
            Simulation sim(cfg, std::move(opts));
            const SimulationResult result = sim.Run();
            RunRecord rec{cfg.model, cfg.nodes, cfg.mobility.speed, cfg.seed, result.metrics};
            WriteOut(runOut, WriteCsv({rec}));
            if (!eventLogPath.empty())
            {
                std::string text;
                for (const std::string& line : sim.EventLog())
                {
                    text += line;
                    text += '\n';
                }
                WriteOut(eventLogPath, text);
            }
            if (!ledgerPath.empty())
            {
                WriteOut(ledgerPath, WriteLedger(sim.Ledger().Records()));
            }
        }
        else if (*sweep)
        {
            const auto rest = Resolve(sweepOpts, cfg);
            FitTrafficWindow(cfg, sweepOpts);
            const SweepSpec spec = ResolveSweep(rest, sweepFlags);
            if (sweepOpts.printConfig)
            {
                std::cout << PrintConfig(cfg);
                return 0;
            }
            const auto records = RunSweep(cfg, spec, workers, [](std::size_t done, std::size_t total) {
                std::cerr << "\r" << done << "/" << total << std::flush;
                if (done == total)
                {
                    std::cerr << "\n";
                }
            });
            WriteOut(sweepOut, WriteCsv(records));
            if (!summaryOut.empty())
            {
                WriteOut(summaryOut, WriteSummaryCsv(Summarize(records)));
            }
        }
        else if (*figures)
        {
            std::vector<ConfigFileEntry> rest;
            if (!figConfig.empty())
            {
                rest = ApplyConfigEntries(cfg, ParseConfigText(ReadFile(figConfig)));
            }
            const SweepSpec spec = ResolveSweep(rest, figFlags);
            const auto records = ParseCsv(ReadFile(figIn));
            const auto tables = MakeFigureTables(records, spec);
            WriteOut(figOut, WriteFigureTables(tables));
            for (const FigureTable& t : tables)
            {
                if (!t.missing.empty())
                {
                    std::cerr << ToString(t.model) << ' ' << t.metric << ": " << t.missing.size()
                              << " missing cells\n";
                }
            }
        }
        else if (*gen)
        {
            Resolve(genOpts, cfg);
            FitTrafficWindow(cfg, genOpts);
            if (genOpts.printConfig)
            {
                std::cout << PrintConfig(cfg);
                return 0;
            }
            ValidateOrThrow(cfg);
            WriteOut(genOut, WriteTrace(GenerateTrace(cfg.model, cfg.nodes, cfg.area, cfg.horizon, cfg.mobility,
                                                      cfg.seed)));
        }
    }
    catch (const ConfigError& e)
    {
        std::cerr << "manetsim: " << e.what() << "\n";
        return kExitInvalid;
    }
    catch (const SweepError& e)
    {
        std::cerr << "manetsim: " << e.what() << "\nfailing configuration:\n" << e.Config();
        return kExitRuntime;
    }
    catch (const TraceParseError& e)
    {
        std::cerr << "manetsim: trace: " << e.what() << "\n";
        return kExitInvalid;
    }
    catch (const std::exception& e)
    {
        std::cerr << "manetsim: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
