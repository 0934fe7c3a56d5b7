#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rcpm/encoders.hpp"
#include "rcpm/learners.hpp"
#include "rcpm/log_model.hpp"
#include "rcpm/prefixer.hpp"

namespace rcpm {

/// Decoded name of the class that absorbs several singleton classes.
inline constexpr std::string_view kRareLabel = "__RARE__";

/// Singleton target classes: one is duplicated (copy appended at the end),
/// several are relabelled to kRareLabel (appended to the encoder).
PrefixDataset handle_rare_classes(const PrefixDataset& ds);

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// Per class of n_c members, max(1, round((1 - ratio) * n_c)) shuffled members go
/// to test and the rest to train. Throws DataError if a class has fewer than 2 members.
SplitIndices stratified_split(std::span<const int> targets, double ratio = 0.8, std::uint64_t seed = 0);

double accuracy(std::span<const int> predicted, std::span<const int> truth);

struct ExperimentConfig {
    std::string dataset_id = "dataset";
    std::vector<std::size_t> candidate_lengths = default_prefix_candidates();
    std::size_t min_resources = 100;
    std::vector<Encoding> encodings = all_encodings();
    std::vector<ModelKind> models{ModelKind::Majority, ModelKind::Forest, ModelKind::Boosted};
    double split_ratio = 0.8;
    std::uint64_t seed = 0;
    std::size_t cv_folds = 3;
    std::size_t mi_k = 20;
    /// Overrides of the default grids per model.
    std::map<ModelKind, HyperGrid> grids;
    std::size_t workers = 1;
    /// Budget of one grid-search cell in seconds; 0 disables the limit.
    double cell_timeout_seconds = 0.0;

    /// Throws ConfigError on an invalid combination.
    void validate() const;
    HyperGrid grid_for(ModelKind kind) const;
};

struct ResultRecord {
    std::string dataset;
    ModelKind model = ModelKind::Majority;
    Encoding encoding = Encoding::SeqOnly;
    std::size_t prefix_length = 0;
    double accuracy = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    double leakage_fraction = 0.0;
    ParamAssignment best_params;
    double cv_accuracy = 0.0;
    bool failed = false;
    std::string error;
    double wall_time_seconds = 0.0;  // not part of the deterministic result files

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// Orders by (dataset, prefix length, encoding, model).
bool record_order(const ResultRecord& a, const ResultRecord& b);

std::vector<ResultRecord> run_experiment(const EventLog& log, const ExperimentConfig& cfg);

struct AggregateRow {
    std::string dataset;
    ModelKind model = ModelKind::Majority;
    Encoding encoding = Encoding::SeqOnly;
    std::size_t n = 0;  // prefix lengths aggregated
    double mean = 0.0;
    double std = 0.0;  // population standard deviation

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct AggregateTable {
    std::vector<AggregateRow> accuracy;
    /// Paired per-prefix differences against SeqOnly of the same (dataset, model, L).
    std::vector<AggregateRow> improvement;

    friend bool operator==(const AggregateTable&, const AggregateTable&) = default;
};

/// Failed records are ignored.
AggregateTable aggregate(std::span<const ResultRecord> records);

}  // namespace rcpm
