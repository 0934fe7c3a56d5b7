#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rcpm/evaluation.hpp"
#include "rcpm/log_model.hpp"
#include "rcpm/report_io.hpp"

namespace rcpm {

struct DatasetEntry {
    std::string id;
    std::filesystem::path path;  // resolved against the config file's directory
    std::string format = "xes";
    XesOptions xes;
    CsvMapping csv;
    std::optional<std::vector<std::size_t>> prefix_lengths;
    std::vector<std::size_t> case_prefix_lengths{1, 2, 3, 4, 5, 6, 7, 8};
    std::optional<std::size_t> min_resources;
};

struct CliConfig {
    std::vector<DatasetEntry> datasets;
    /// Template for every dataset; candidate lengths and min_resources may be overridden per dataset.
    ExperimentConfig experiment;
    std::vector<ReportFormat> formats{ReportFormat::Csv, ReportFormat::Json};
    std::filesystem::path output_dir = "out";
    int verbosity = 1;

    const DatasetEntry& dataset(const std::string& id) const;
    /// Experiment settings for one dataset with its overrides applied.
    ExperimentConfig experiment_for(const DatasetEntry& d) const;
};

/// Throws ConfigError on schema violations (unknown encoding, non-ascending grid, ...).
CliConfig parse_cli_config(const std::string& json_text, const std::filesystem::path& base_dir = ".");
CliConfig load_cli_config(const std::filesystem::path& path);

}  // namespace rcpm
