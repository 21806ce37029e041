#ifndef MANET_SCENARIO_CONFIG_H
#define MANET_SCENARIO_CONFIG_H

#include "manet/aomdv-routing.h"
#include "manet/mobility.h"
#include "manet/radio.h"
#include "manet/traffic.h"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace manet
{

/// Every knob of one simulation run.
struct ScenarioConfig
{
    std::size_t nodes = 50;
    MobilityModel model = MobilityModel::RandomWaypoint;
    std::uint64_t seed = 1;
    Area area;
    Time horizon = 1000.0;
    MobilityParams mobility;
    RadioConfig radio;
    TrafficConfig traffic;
    aomdv::AomdvConfig aomdv;

    /// One message per offending field, prefixed with its "section.key" name.
    std::vector<std::string> Validate() const;
};

class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& Errors() const { return m_errors; }

  private:
    std::vector<std::string> m_errors;
};

/// Throws ConfigError listing every problem.
void ValidateOrThrow(const ScenarioConfig& cfg);

/// Names accepted by SetField and emitted by PrintConfig, as "section.key".
std::vector<std::string> ConfigKeys();

/// Sets one field from text. Throws ConfigError for an unknown key or a value
/// that does not parse.
void SetField(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::string GetField(const ScenarioConfig& cfg, const std::string& key);

struct ConfigFileEntry
{
    std::string section;
    std::string key;
    std::string value;
    std::size_t line;
};

/**
 * Reads `key = value` lines grouped under `[section]` headers. Blank lines and
 * lines starting with '#' or ';' are ignored. Throws ConfigError naming the
 * line of anything else.
 */
std::vector<ConfigFileEntry> ParseConfigText(const std::string& text);
/// Applies entries of the scenario, mobility, radio, traffic and aomdv
/// sections; returns the rest (e.g. [sweep]) for other consumers.
std::vector<ConfigFileEntry> ApplyConfigEntries(ScenarioConfig& cfg,
                                                const std::vector<ConfigFileEntry>& entries);

/// Fully resolved configuration in the same file format.
std::string PrintConfig(const ScenarioConfig& cfg);

std::string FormatDouble(double v);
double ParseDouble(const std::string& text);
std::uint64_t ParseUnsigned(const std::string& text);
bool ParseBool(const std::string& text);

} // namespace manet

#endif // MANET_SCENARIO_CONFIG_H
