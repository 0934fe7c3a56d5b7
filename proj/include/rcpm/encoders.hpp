#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rcpm/log_model.hpp"
#include "rcpm/matrix.hpp"
#include "rcpm/prefixer.hpp"

namespace rcpm {

enum class Encoding { SeqOnly, SCap, S2g, S2gR };

std::string_view to_string(Encoding e);
/// Throws ConfigError on an unknown name.
Encoding parse_encoding(std::string_view name);
const std::vector<Encoding>& all_encodings();

struct EncodedDataset {
    std::vector<std::string> feature_names;
    Matrix rows;
    std::vector<int> targets;
    Encoding encoding = Encoding::SeqOnly;
};

/// Per resource, a 0/1 flag for every activity of the log alphabet telling
/// whether the resource performed that activity anywhere in the log.
struct CapabilityMap {
    std::vector<std::string> alphabet;
    std::map<std::string, std::vector<std::uint8_t>> capabilities;
};

CapabilityMap capability_map(const EventLog& log);

using Bigram = std::pair<int, int>;
using BigramCounts = std::map<Bigram, int>;

/// Counts of adjacent ordered pairs; the counts sum to `prefix.size() - 1`.
BigramCounts count_2grams(std::span<const int> prefix);

/// Plug-in estimate of I(X;Y) in nats, each distinct value a category.
/// Throws DataError on a length mismatch or empty input.
double mutual_information(std::span<const double> column, std::span<const int> targets);
double mutual_information(std::span<const int> x, std::span<const int> y);

struct SelectedBigrams {
    std::vector<Bigram> bigrams;  // selection order
    std::vector<double> scores;   // MI of each selected bigram

    friend bool operator==(const SelectedBigrams&, const SelectedBigrams&) = default;
};

/// The `k` columns of highest MI with `targets`; equal scores (to 1e-12) are
/// ordered by bigram. Fewer than `k` candidates are all returned.
SelectedBigrams select_top_k(const std::map<Bigram, std::vector<double>>& columns, std::span<const int> targets,
                             std::size_t k = 20);

/// Builds the count column of every bigram observed in the prefixes at
/// `train_indices` and selects the top `k` of them against their targets.
SelectedBigrams fit_bigram_selection(const PrefixDataset& ds, std::span<const std::size_t> train_indices,
                                     std::size_t k = 20);

struct RunFeatures {
    std::size_t n_runs = 0;
    double avg_run_length = 0.0;

    friend bool operator==(const RunFeatures&, const RunFeatures&) = default;
};

/// Number of maximal blocks of equal adjacent ids and the mean block length.
RunFeatures run_features(std::span<const int> prefix);

EncodedDataset encode_seq_only(const PrefixDataset& ds);
EncodedDataset encode_scap(const PrefixDataset& ds, const CapabilityMap& capabilities);
EncodedDataset encode_s2g(const PrefixDataset& ds, const SelectedBigrams& selection);
EncodedDataset encode_s2gr(const PrefixDataset& ds, const SelectedBigrams& selection);

struct EncodingInputs {
    const CapabilityMap* capabilities = nullptr;  // SCap
    const SelectedBigrams* selection = nullptr;   // S2g, S2gR
};

/// Dispatches on `encoding`; throws ConfigError when a required input is missing.
EncodedDataset encode(const PrefixDataset& ds, Encoding encoding, const EncodingInputs& inputs);

/// Header of feature names plus a final `target` column.
void write_encoded_csv(std::ostream& out, const EncodedDataset& ds);

}  // namespace rcpm
