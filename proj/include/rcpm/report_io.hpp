#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rcpm/evaluation.hpp"
#include "rcpm/profiler.hpp"

namespace rcpm {

// Result files (deterministic for a fixed config and seed):
//
//   results.csv / results.json   one row per (dataset, L, encoding, model):
//     dataset, prefix_length, encoding, model, accuracy, n_train, n_test,
//     leakage_fraction, cv_accuracy, best_params (JSON object), status (ok|failed), error
//   accuracy_by_model.csv        wide: dataset, then <model>/<encoding>/mean and /std
//   improvement_vs_seqonly.csv   wide, same layout, paired difference against SeqOnly
//   aggregates.json              both tables in long form
//
// Standard deviations are population standard deviations across prefix lengths.
// timings.csv carries the wall time of every cell and is not deterministic.

void write_results_csv(std::ostream& out, std::span<const ResultRecord> records);
void write_results_json(std::ostream& out, std::span<const ResultRecord> records);
std::vector<ResultRecord> read_results_csv(std::istream& in);
std::vector<ResultRecord> read_results_json(std::istream& in);

void write_aggregate_wide_csv(std::ostream& out, std::span<const AggregateRow> rows);
void write_aggregates_json(std::ostream& out, const AggregateTable& table);
void write_timings_csv(std::ostream& out, std::span<const ResultRecord> records);

enum class ReportFormat { Csv, Json };

/// Writes the files listed above into `dir` (created if needed) for the
/// requested formats and returns their paths.
std::vector<std::filesystem::path> export_report(std::span<const ResultRecord> records, const AggregateTable& table,
                                                 const std::filesystem::path& dir,
                                                 std::span<const ReportFormat> formats);

// Profile files: profile.json (one object) and profile.csv (header + one row).
void write_profile_json(std::ostream& out, const std::string& dataset, const DatasetProfile& p);
void write_profile_csv(std::ostream& out, const std::string& dataset, const DatasetProfile& p);
void write_baseline_csv(std::ostream& out, const std::string& dataset, const std::string& perspective,
                        std::span<const BaselineRow> rows);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace rcpm
