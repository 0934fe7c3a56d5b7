#include "rcpm/prefixer.hpp"

#include <set>

#include "rcpm/csv.hpp"
#include "rcpm/error.hpp"

namespace rcpm {

LabelEncoder::LabelEncoder(std::vector<std::string> labels) {
    std::set<std::string> sorted(labels.begin(), labels.end());
    for (const auto& l : sorted) add(l);
}

int LabelEncoder::encode(const std::string& label) const {
    auto it = forward_.find(label);
    if (it == forward_.end()) throw DataError("label '" + label + "' is not known to the encoder");
    return it->second;
}

const std::string& LabelEncoder::decode(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= backward_.size())
        throw DataError("label id " + std::to_string(id) + " is out of range");
    return backward_[static_cast<std::size_t>(id)];
}

int LabelEncoder::add(const std::string& label) {
    auto [it, inserted] = forward_.emplace(label, static_cast<int>(backward_.size()));
    if (inserted) backward_.push_back(label);
    return it->second;
}

std::vector<int> LabelEncoder::encode(std::span<const std::string> labels) const {
    std::vector<int> ids;
    ids.reserve(labels.size());
    for (const auto& l : labels) ids.push_back(encode(l));
    return ids;
}

std::vector<std::string> LabelEncoder::decode(std::span<const int> ids) const {
    std::vector<std::string> labels;
    labels.reserve(ids.size());
    for (int id : ids) labels.push_back(decode(id));
    return labels;
}

std::vector<int> PrefixDataset::targets() const {
    std::vector<int> y;
    y.reserve(samples.size());
    for (const auto& s : samples) y.push_back(s.target);
    return y;
}

LabelEncoder fit_label_encoder(const EventLog& log) { return LabelEncoder(log.activity_alphabet); }

std::vector<std::string> eligible_resources(const SequenceView& view, std::size_t length) {
    std::vector<std::string> keys;
    for (const auto& [key, seq] : view.sequences)
        if (seq.size() >= length + 1) keys.push_back(key);
    return keys;
}

PrefixDataset build_prefix_dataset(const SequenceView& view, std::size_t length, const LabelEncoder& encoder) {
    if (length == 0) throw ConfigError("prefix length must be at least 1");
    PrefixDataset ds;
    ds.prefix_length = length;
    ds.encoder = encoder;
    for (const auto& key : eligible_resources(view, length)) {
        const auto& seq = view.sequences.at(key);
        PrefixSample s;
        s.resource_id = key;
        s.prefix.reserve(length);
        for (std::size_t i = 0; i < length; ++i) s.prefix.push_back(encoder.encode(seq[i]));
        s.target = encoder.encode(seq[length]);
        ds.samples.push_back(std::move(s));
    }
    if (ds.samples.empty())
        throw DataError("no sequence is longer than prefix length " + std::to_string(length) +
                        "; lower the prefix length or adjust the prefix grid");
    return ds;
}

std::vector<std::size_t> prefix_grid(const SequenceView& view, std::span<const std::size_t> candidate_lengths,
                                     std::size_t min_resources) {
    for (std::size_t i = 0; i < candidate_lengths.size(); ++i) {
        if (candidate_lengths[i] == 0) throw ConfigError("prefix lengths must be positive");
        if (i && candidate_lengths[i] <= candidate_lengths[i - 1])
            throw ConfigError("prefix lengths must be strictly ascending");
    }
    std::vector<std::size_t> lengths;
    for (auto length : candidate_lengths) {
        if (eligible_resources(view, length).size() < min_resources) break;
        lengths.push_back(length);
    }
    return lengths;
}

void write_prefix_csv(std::ostream& out, const PrefixDataset& ds) {
    csv::Row header{"resource_id"};
    for (std::size_t i = 1; i <= ds.prefix_length; ++i) header.push_back("a_" + std::to_string(i));
    header.push_back("target");
    csv::write_row(out, header);
    for (const auto& s : ds.samples) {
        csv::Row row{s.resource_id};
        for (int id : s.prefix) row.push_back(std::to_string(id));
        row.push_back(std::to_string(s.target));
        csv::write_row(out, row);
    }
}

}  // namespace rcpm
