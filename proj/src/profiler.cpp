#include "rcpm/profiler.hpp"

#include <cmath>
#include <unordered_map>

#include "rcpm/evaluation.hpp"
#include "rcpm/prefixer.hpp"
#include "rcpm/seeding.hpp"

namespace rcpm {
namespace {

void require_non_empty(const SequenceView& view, const char* what) {
    if (view.empty()) throw DataError(std::string(what) + " of an empty view");
}

std::unordered_map<std::string_view, std::size_t> frequencies(std::span<const std::string> sequence) {
    std::unordered_map<std::string_view, std::size_t> freq;
    for (const auto& a : sequence) ++freq[a];
    return freq;
}

}  // namespace

double variant_ratio(const SequenceView& view) {
    require_non_empty(view, "variant ratio");
    std::set<std::vector<std::string>> variants;
    for (const auto& [key, seq] : view.sequences) variants.insert(seq);
    return static_cast<double>(variants.size()) / static_cast<double>(view.sequences.size());
}

double avg_sequence_length(const SequenceView& view) {
    require_non_empty(view, "average sequence length");
    return static_cast<double>(view.event_count()) / static_cast<double>(view.sequences.size());
}

double specialization(std::span<const std::string> sequence, std::size_t log_alphabet_size) {
    if (sequence.empty()) throw DataError("specialization of an empty sequence");
    auto freq = frequencies(sequence);
    if (log_alphabet_size < freq.size())
        throw DataError("alphabet size " + std::to_string(log_alphabet_size) + " is smaller than the " +
                        std::to_string(freq.size()) + " distinct activities of the sequence");
    if (log_alphabet_size == 1) return 1.0;
    const double n = static_cast<double>(sequence.size());
    double entropy = 0.0;
    for (const auto& [activity, count] : freq) {
        double p = static_cast<double>(count) / n;
        entropy -= p * std::log(p);
    }
    return 1.0 - entropy / std::log(static_cast<double>(log_alphabet_size));
}

double avg_specialization(const SequenceView& view, std::size_t log_alphabet_size) {
    require_non_empty(view, "average specialization");
    double sum = 0.0;
    for (const auto& [key, seq] : view.sequences) sum += specialization(seq, log_alphabet_size);
    return sum / static_cast<double>(view.sequences.size());
}

double repetition(std::span<const std::string> sequence) {
    if (sequence.empty()) throw DataError("repetition of an empty sequence");
    double distinct = static_cast<double>(frequencies(sequence).size());
    return (static_cast<double>(sequence.size()) - distinct) / distinct;
}

double avg_repetition(const SequenceView& view) {
    require_non_empty(view, "average repetition");
    double sum = 0.0;
    for (const auto& [key, seq] : view.sequences) sum += repetition(seq);
    return sum / static_cast<double>(view.sequences.size());
}

DatasetProfile profile(const EventLog& log) {
    auto by_resource = resource_view(log);
    auto by_case = case_view(log);
    DatasetProfile p;
    p.n_cases = log.case_set.size();
    p.n_events = log.events.size();
    p.n_activities = log.activity_alphabet.size();
    p.n_resources = log.resource_set.size();
    p.n_dropped_events = log.dropped_event_count;
    p.avg_seq_len_per_resource = avg_sequence_length(by_resource);
    p.avg_specialization = avg_specialization(by_resource, p.n_activities);
    p.avg_repetition = avg_repetition(by_resource);
    p.variant_resource_ratio = variant_ratio(by_resource);
    p.variant_case_ratio = variant_ratio(by_case);
    return p;
}

std::vector<BaselineRow> majority_baseline(const SequenceView& view, const EventLog& log,
                                           std::span<const std::size_t> candidate_lengths, std::size_t min_keys,
                                           double split_ratio, std::uint64_t seed) {
    auto encoder = fit_label_encoder(log);
    std::vector<BaselineRow> rows;
    for (std::size_t length : prefix_grid(view, candidate_lengths, min_keys)) {
        auto ds = handle_rare_classes(build_prefix_dataset(view, length, encoder));
        auto targets = ds.targets();
        auto split = stratified_split(targets, split_ratio, derive_seed(seed, "split", length));

        std::vector<std::string> train_y;
        std::vector<std::string> test_y;
        std::vector<std::vector<int>> train_x;
        std::vector<std::vector<int>> test_x;
        for (std::size_t i : split.train) {
            train_y.push_back(ds.encoder.decode(targets[i]));
            train_x.push_back(ds.samples[i].prefix);
        }
        for (std::size_t i : split.test) {
            test_y.push_back(ds.encoder.decode(targets[i]));
            test_x.push_back(ds.samples[i].prefix);
        }
        BaselineRow row;
        row.prefix_length = length;
        row.n_samples = ds.samples.size();
        row.majority_accuracy = majority_class_accuracy<std::string>(train_y, test_y);
        row.leaked_fraction =
            example_leakage<std::vector<int>>(train_x, test_x).leaked_fraction;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rcpm
