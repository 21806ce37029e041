#include "manet/experiment.h"
#include "manet/scenario-config.h"
#include "manet/simulation.h"
#include "manet/trace-io.h"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace manet;

namespace
{

using Overrides = std::map<std::string, std::string>;

ScenarioConfig
Resolve(const Overrides& fields, const std::string& text)
{
    ScenarioConfig cfg;
    if (!text.empty())
    {
        const auto rest = ApplyConfigEntries(cfg, ParseConfigText(text));
        if (!rest.empty())
        {
            throw ConfigError({"unknown section [" + rest.front().section + "]"});
        }
    }
    for (const auto& [key, value] : fields)
    {
        SetField(cfg, key, value);
    }
    return cfg;
}

Overrides
AsDict(const ScenarioConfig& cfg)
{
    Overrides out;
    for (const auto& key : ConfigKeys())
    {
        out[key] = GetField(cfg, key);
    }
    return out;
}

py::object
Opt(const std::optional<double>& v)
{
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

py::dict
MetricsDict(const RunMetrics& m)
{
    py::dict d;
    d["sent"] = m.sent;
    d["delivered"] = m.delivered;
    d["drops_queue"] = m.dropsQueue;
    d["drops_noroute"] = m.dropsNoRoute;
    d["drops_loss"] = m.dropsLoss;
    d["in_flight"] = m.inFlight;
    d["control_packets"] = m.controlPackets;
    d["pdr"] = Opt(m.pdr);
    d["avg_delay"] = Opt(m.avgDelay);
    return d;
}

py::dict
RecordDict(const RunRecord& r)
{
    py::dict d = MetricsDict(r.metrics);
    d["model"] = ToString(r.model);
    d["nodes"] = r.nodes;
    d["speed"] = r.speed;
    d["seed"] = r.seed;
    return d;
}

py::dict
Run(const Overrides& fields, const std::string& text, const std::optional<std::string>& trace, bool packets)
{
    const ScenarioConfig cfg = Resolve(fields, text);
    SimulationOptions opts;
    if (trace)
    {
        opts.trace = ParseTrace(*trace);
    }
    std::unique_ptr<Simulation> sim;
    SimulationResult r;
    {
        py::gil_scoped_release release;
        sim = std::make_unique<Simulation>(cfg, std::move(opts));
        r = sim->Run();
    }
    py::list records;
    if (packets)
    {
        for (const PacketRecord& p : sim->Ledger().Records())
        {
            py::dict d;
            d["id"] = p.packetId;
            d["flow"] = p.flow;
            d["src"] = p.src;
            d["dst"] = p.dst;
            d["sent_at"] = p.sentAt;
            d["delivered_at"] = Opt(p.deliveredAt);
            d["fate"] = ToString(p.fate);
            d["hops"] = p.hopTrace;
            records.append(d);
        }
    }
    py::dict d = MetricsDict(r.metrics);
    py::dict inv;
    inv["packets_with_repeated_node"] = r.invariants.packetsWithRepeatedNode;
    inv["loop_rule_violations"] = r.invariants.loopRuleViolations;
    inv["disjointness_violations"] = r.invariants.disjointnessViolations;
    inv["hop_bound_violations"] = r.invariants.hopBoundViolations;
    inv["route_snapshots"] = r.invariants.routeSnapshots;
    inv["samples"] = r.invariants.samples;
    d["invariants"] = inv;
    d["events"] = r.eventsProcessed;
    d["trace_digest"] = r.traceDigest;
    d["max_queue"] = r.maxQueueOccupancy;
    if (packets)
    {
        d["packets"] = records;
    }
    return d;
}

SweepSpec
Spec(const std::vector<std::string>& models, const std::vector<std::size_t>& nodes,
     const std::vector<double>& speeds, std::size_t seeds, std::uint64_t baseSeed)
{
    SweepSpec spec;
    spec.models.clear();
    for (const auto& m : models)
    {
        spec.models.push_back(ParseMobilityModel(m));
    }
    spec.nodes = nodes;
    spec.speeds = speeds;
    spec.seeds = seeds;
    spec.baseSeed = baseSeed;
    if (auto errors = spec.Validate(); !errors.empty())
    {
        throw ConfigError(errors);
    }
    return spec;
}

std::vector<RunRecord>
Sweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned workers)
{
    py::gil_scoped_release release;
    return RunSweep(base, spec, workers);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Discrete-event MANET simulator with AOMDV routing";

    static py::exception<ConfigError> configError(m, "ConfigError", PyExc_ValueError);
    static py::exception<SweepError> sweepError(m, "SweepError", PyExc_RuntimeError);
    py::register_exception<TraceParseError>(m, "TraceParseError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
            {
                std::rethrow_exception(p);
            }
        }
        catch (const ConfigError& e)
        {
            std::string msg;
            for (const auto& s : e.Errors())
            {
                msg += (msg.empty() ? "" : "; ") + s;
            }
            py::set_error(configError, msg.c_str());
        }
        catch (const SweepError& e)
        {
            py::set_error(sweepError, (std::string(e.what()) + "\n" + e.Config()).c_str());
        }
    });

    m.def("config_keys", &ConfigKeys, "Every settable \"section.key\" name");
    m.def(
        "resolve_config",
        [](const Overrides& fields, const std::string& text) { return AsDict(Resolve(fields, text)); },
        py::arg("fields") = Overrides{}, py::arg("text") = "",
        "Defaults, then config-file text, then field overrides, as a key -> value dict");
    m.def(
        "validate_config",
        [](const Overrides& fields, const std::string& text) { return Resolve(fields, text).Validate(); },
        py::arg("fields") = Overrides{}, py::arg("text") = "");
    m.def(
        "print_config", [](const Overrides& fields, const std::string& text) { return PrintConfig(Resolve(fields, text)); },
        py::arg("fields") = Overrides{}, py::arg("text") = "");

    m.def("run", &Run, py::arg("fields") = Overrides{}, py::arg("text") = "", py::arg("trace") = py::none(),
          py::arg("packets") = false,
          "Simulates one scenario to its horizon. Returns metrics, invariant counters and optionally "
          "per-packet records.");

    m.def(
        "sweep",
        [](const Overrides& fields, const std::string& text, const std::vector<std::string>& models,
           const std::vector<std::size_t>& nodes, const std::vector<double>& speeds, std::size_t seeds,
           std::uint64_t baseSeed, unsigned workers) {
            const auto records = Sweep(Resolve(fields, text), Spec(models, nodes, speeds, seeds, baseSeed), workers);
            py::list out;
            for (const auto& r : records)
            {
                out.append(RecordDict(r));
            }
            return out;
        },
        py::arg("fields") = Overrides{}, py::arg("text") = "", py::arg("models") = std::vector<std::string>{"rwp", "rd", "prw"},
        py::arg("nodes") = SweepSpec{}.nodes, py::arg("speeds") = SweepSpec{}.speeds, py::arg("seeds") = 10,
        py::arg("base_seed") = 1, py::arg("workers") = 1);

    m.def(
        "sweep_csv",
        [](const Overrides& fields, const std::string& text, const std::vector<std::string>& models,
           const std::vector<std::size_t>& nodes, const std::vector<double>& speeds, std::size_t seeds,
           std::uint64_t baseSeed, unsigned workers) {
            return WriteCsv(Sweep(Resolve(fields, text), Spec(models, nodes, speeds, seeds, baseSeed), workers));
        },
        py::arg("fields") = Overrides{}, py::arg("text") = "", py::arg("models") = std::vector<std::string>{"rwp", "rd", "prw"},
        py::arg("nodes") = SweepSpec{}.nodes, py::arg("speeds") = SweepSpec{}.speeds, py::arg("seeds") = 10,
        py::arg("base_seed") = 1, py::arg("workers") = 1);

    m.def(
        "summarize_csv",
        [](const std::string& csv) { return WriteSummaryCsv(Summarize(ParseCsv(csv))); }, py::arg("csv"));

    m.def(
        "generate_trace",
        [](const Overrides& fields, const std::string& text) {
            const ScenarioConfig cfg = Resolve(fields, text);
            ValidateOrThrow(cfg);
            return WriteTrace(GenerateTrace(cfg.model, cfg.nodes, cfg.area, cfg.horizon, cfg.mobility, cfg.seed));
        },
        py::arg("fields") = Overrides{}, py::arg("text") = "", "Mobility trace of the scenario in text form");

    m.def(
        "trace_positions",
        [](const std::string& trace, double t) {
            const MobilityTrace tr = ParseTrace(trace);
            std::vector<std::pair<double, double>> out;
            for (NodeId n = 0; n < tr.NodeCount(); ++n)
            {
                const Vec2 p = tr.PositionAt(n, t);
                out.emplace_back(p.x, p.y);
            }
            return out;
        },
        py::arg("trace"), py::arg("t"), "Node positions at time t");
}
