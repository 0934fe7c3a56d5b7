#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rcpm/error.hpp"
#include "rcpm/log_model.hpp"

namespace rcpm {

struct DatasetProfile {
    std::size_t n_cases = 0;
    std::size_t n_events = 0;
    std::size_t n_activities = 0;
    std::size_t n_resources = 0;
    std::size_t n_dropped_events = 0;
    double avg_seq_len_per_resource = 0.0;
    double avg_specialization = 0.0;
    double avg_repetition = 0.0;
    double variant_resource_ratio = 0.0;
    double variant_case_ratio = 0.0;
};

struct LeakageReport {
    std::size_t prefix_length = 0;
    double leaked_fraction = 0.0;
    std::size_t n_test = 0;
    std::size_t n_leaked = 0;
};

/// Distinct full sequences divided by the number of keys.
double variant_ratio(const SequenceView& view);

/// Total events divided by the number of keys.
double avg_sequence_length(const SequenceView& view);

/// 1 - H / ln(alphabet_size), H the natural-log Shannon entropy of the
/// activity frequencies in `sequence`. An alphabet of one activity gives 1.
double specialization(std::span<const std::string> sequence, std::size_t log_alphabet_size);

double avg_specialization(const SequenceView& view, std::size_t log_alphabet_size);

/// (len - distinct) / distinct
double repetition(std::span<const std::string> sequence);

double avg_repetition(const SequenceView& view);

/// Accuracy of always predicting the most frequent training label; frequency
/// ties go to the smallest label under `operator<`.
template <class Label>
double majority_class_accuracy(std::span<const Label> train, std::span<const Label> test) {
    if (train.empty() || test.empty()) throw DataError("majority_class_accuracy needs non-empty train and test targets");
    std::map<Label, std::size_t> counts;
    for (const auto& y : train) ++counts[y];
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;
    auto hits = std::count(test.begin(), test.end(), best->first);
    return static_cast<double>(hits) / static_cast<double>(test.size());
}

/// Counts test prefixes (with multiplicity) whose exact sequence occurs among the train prefixes.
template <class Sequence>
LeakageReport example_leakage(std::span<const Sequence> train, std::span<const Sequence> test) {
    if (test.empty()) throw DataError("example_leakage needs at least one test prefix");
    const std::size_t length = test.front().size();
    auto check = [&](const Sequence& s) {
        if (s.size() != length) throw DataError("example_leakage requires prefixes of equal length");
    };
    std::set<Sequence> seen;
    for (const auto& s : train) {
        check(s);
        seen.insert(s);
    }
    LeakageReport r;
    r.prefix_length = length;
    r.n_test = test.size();
    for (const auto& s : test) {
        check(s);
        if (seen.count(s)) ++r.n_leaked;
    }
    r.leaked_fraction = static_cast<double>(r.n_leaked) / static_cast<double>(r.n_test);
    return r;
}

DatasetProfile profile(const EventLog& log);

/// One row of the majority-baseline study for one perspective (resource or case).
struct BaselineRow {
    std::size_t prefix_length = 0;
    std::size_t n_samples = 0;
    double majority_accuracy = 0.0;
    double leaked_fraction = 0.0;
    friend bool operator==(const BaselineRow&, const BaselineRow&) = default;
};

/// For every admissible prefix length (see prefix_grid) builds the one-prefix-per-key
/// data set of `view`, applies rare-class handling, splits it stratified and reports
/// the majority-class accuracy and the example leakage of the split.
std::vector<BaselineRow> majority_baseline(const SequenceView& view, const EventLog& log,
                                           std::span<const std::size_t> candidate_lengths, std::size_t min_keys,
                                           double split_ratio, std::uint64_t seed);

}  // namespace rcpm
