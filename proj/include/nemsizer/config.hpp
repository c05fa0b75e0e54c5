#pragma once

#include "nemsizer/scenario.hpp"
#include "nemsizer/tariff.hpp"

#include <array>
#include <optional>
#include <string>

namespace nemsizer
{
    /// Contents of a TOML configuration file with relative data paths
    /// resolved against the file's directory.
    struct Config
    {
        std::string source;
        TariffSchedule tariff;
        bool has_scenario = false;
        std::optional<std::string> hourly_path;
        std::optional<std::string> aggregates_path;
        std::optional<std::array<double, 12>> sigma_by_month;
        BuildOptions build;
    };

    /// Parses configuration text. Errors are ValidationErrors of the form
    /// "<source>:<line>: <message>".
    Config parse_config(std::string const& text, std::string const& source = "<config>");

    /// Reads and parses a configuration file.
    Config read_config(std::string const& path);

    /// Per-period inputs named by the config: the aggregates file, or the
    /// hourly file aggregated under the config's tariff with its monthly
    /// sigma schedule.
    std::vector<PeriodAggregate> load_aggregates(Config const& config, ValidatedSchedule const& schedule);

    /// Validates the tariff and builds the scenario the config describes.
    Scenario load_config(std::string const& path);
    Scenario build_from_config(Config const& config);
}
