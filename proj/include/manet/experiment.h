#ifndef MANET_EXPERIMENT_H
#define MANET_EXPERIMENT_H

#include "manet/metrics.h"
#include "manet/scenario-config.h"
#include "manet/simulation.h"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet
{

/// One CSV row: scenario identity plus its metrics.
struct RunRecord
{
    MobilityModel model = MobilityModel::RandomWaypoint;
    std::size_t nodes = 0;
    double speed = 0.0;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

struct SweepSpec
{
    std::vector<MobilityModel> models{MobilityModel::RandomWaypoint, MobilityModel::RandomDirection,
                                      MobilityModel::ProbRandomWalk};
    std::vector<std::size_t> nodes{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<double> speeds{10, 20, 30, 40};
    std::size_t seeds = 10;
    // Seeds used per point are baseSeed, baseSeed + 1, ...
    std::uint64_t baseSeed = 1;

    std::vector<std::string> Validate() const;
    std::size_t Size() const { return models.size() * nodes.size() * speeds.size() * seeds; }
};

/// Applies `[sweep]` entries (models, nodes, speeds, seeds, base_seed) and
/// throws ConfigError on unknown keys or bad values.
void ApplySweepEntries(SweepSpec& spec, const std::vector<ConfigFileEntry>& entries);

class SweepError : public std::runtime_error
{
  public:
    SweepError(const std::string& what, std::string config)
        : std::runtime_error(what),
          m_config(std::move(config))
    {
    }
    /// Resolved configuration of the failing scenario.
    const std::string& Config() const { return m_config; }

  private:
    std::string m_config;
};

/// Validates, simulates to the horizon and packages the row.
RunRecord RunScenario(const ScenarioConfig& cfg);

/// The scenario of one sweep point.
ScenarioConfig SweepPoint(const ScenarioConfig& base, MobilityModel model, std::size_t nodes, double speed,
                          std::uint64_t seed);

/**
 * Runs every (model, nodes, speed, seed) combination on up to `workers`
 * threads. Records come back in canonical order regardless of scheduling.
 * The first failing scenario in that order aborts the sweep with SweepError.
 */
std::vector<RunRecord> RunSweep(const ScenarioConfig& base, const SweepSpec& spec, unsigned workers = 1,
                                const std::function<void(std::size_t done, std::size_t total)>& progress = {});

extern const char* const kCsvHeader;
std::string CsvRow(const RunRecord& r);
std::string WriteCsv(const std::vector<RunRecord>& records);
/// Inverse of WriteCsv; throws std::invalid_argument naming the bad line.
std::vector<RunRecord> ParseCsv(const std::string& text);

struct SummaryRow
{
    MobilityModel model;
    std::size_t nodes;
    double speed;
    std::size_t runs = 0;
    std::optional<double> meanPdr;
    // Standard error of the mean PDR; absent with fewer than two defined values.
    std::optional<double> pdrStdErr;
    std::optional<double> meanDelay;
};

/// Seed means per (model, nodes, speed) in first-appearance order.
std::vector<SummaryRow> Summarize(const std::vector<RunRecord>& records);
std::string WriteSummaryCsv(const std::vector<SummaryRow>& rows);

/// Rows = node counts, columns = speeds, cells = seed means.
struct FigureTable
{
    MobilityModel model;
    std::string metric; // "pdr" or "delay"
    std::vector<std::size_t> nodes;
    std::vector<double> speeds;
    std::vector<std::vector<std::optional<double>>> cells;
    std::vector<std::string> missing;

    std::optional<double> Max() const;
};

/// A PDR and a delay table for every model of the sweep.
std::vector<FigureTable> MakeFigureTables(const std::vector<RunRecord>& records, const SweepSpec& spec);
std::string WriteFigureTables(const std::vector<FigureTable>& tables);

std::string FormatFixed(double v);

} // namespace manet

#endif // MANET_EXPERIMENT_H
