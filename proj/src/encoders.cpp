#include "rcpm/encoders.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "rcpm/csv.hpp"
#include "rcpm/error.hpp"

namespace rcpm {

std::string_view to_string(Encoding e) {
    switch (e) {
        case Encoding::SeqOnly: return "SeqOnly";
        case Encoding::SCap: return "SCap";
        case Encoding::S2g: return "S2g";
        case Encoding::S2gR: return "S2gR";
    }
    return "?";
}

Encoding parse_encoding(std::string_view name) {
    for (auto e : all_encodings())
        if (to_string(e) == name) return e;
    throw ConfigError("unknown encoding '" + std::string(name) + "' (expected SeqOnly, SCap, S2g or S2gR)");
}

const std::vector<Encoding>& all_encodings() {
    static const std::vector<Encoding> all{Encoding::SeqOnly, Encoding::SCap, Encoding::S2g, Encoding::S2gR};
    return all;
}

CapabilityMap capability_map(const EventLog& log) {
    CapabilityMap map;
    map.alphabet = log.activity_alphabet;
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < map.alphabet.size(); ++i) position.emplace(map.alphabet[i], i);
    for (const auto& r : log.resource_set) map.capabilities[r].assign(map.alphabet.size(), 0);
    for (const auto& e : log.events) map.capabilities[e.resource][position.at(e.activity)] = 1;
    return map;
}

BigramCounts count_2grams(std::span<const int> prefix) {
    BigramCounts counts;
    for (std::size_t i = 1; i < prefix.size(); ++i) ++counts[{prefix[i - 1], prefix[i]}];
    return counts;
}

namespace {

template <class X, class Y>
double plugin_mi(std::span<const X> x, std::span<const Y> y) {
    if (x.size() != y.size())
        throw DataError("mutual_information: column has " + std::to_string(x.size()) + " values but targets have " +
                        std::to_string(y.size()));
    if (x.empty()) throw DataError("mutual_information of empty columns");
    std::map<std::pair<X, Y>, std::size_t> joint;
    std::map<X, std::size_t> px;
    std::map<Y, std::size_t> py;
    for (std::size_t i = 0; i < x.size(); ++i) {
        ++joint[{x[i], y[i]}];
        ++px[x[i]];
        ++py[y[i]];
    }
    const double n = static_cast<double>(x.size());
    double mi = 0.0;
    for (const auto& [xy, count] : joint) {
        double c = static_cast<double>(count);
        double ratio = (c * n) / (static_cast<double>(px[xy.first]) * static_cast<double>(py[xy.second]));
        mi += c / n * std::log(ratio);
    }
    return std::max(mi, 0.0);
}

std::string activity_name(const LabelEncoder& enc, int id) { return enc.decode(id); }

EncodedDataset with_sequence_columns(const PrefixDataset& ds, Encoding encoding, std::size_t extra_columns) {
    EncodedDataset out;
    out.encoding = encoding;
    for (std::size_t i = 1; i <= ds.prefix_length; ++i) out.feature_names.push_back("pos_" + std::to_string(i));
    out.rows = Matrix(ds.samples.size(), ds.prefix_length + extra_columns);
    out.targets = ds.targets();
    for (std::size_t r = 0; r < ds.samples.size(); ++r) {
        const auto& prefix = ds.samples[r].prefix;
        if (prefix.size() != ds.prefix_length) throw DataError("prefix of sample " + std::to_string(r) + " has wrong length");
        for (std::size_t c = 0; c < prefix.size(); ++c) out.rows(r, c) = prefix[c];
    }
    return out;
}

void fill_bigram_columns(const PrefixDataset& ds, const SelectedBigrams& selection, EncodedDataset& out,
                         std::size_t offset) {
    for (const auto& [a, b] : selection.bigrams)
        out.feature_names.push_back("2g:" + activity_name(ds.encoder, a) + ">" + activity_name(ds.encoder, b));
    for (std::size_t r = 0; r < ds.samples.size(); ++r) {
        auto counts = count_2grams(ds.samples[r].prefix);
        for (std::size_t j = 0; j < selection.bigrams.size(); ++j) {
            auto it = counts.find(selection.bigrams[j]);
            out.rows(r, offset + j) = it == counts.end() ? 0.0 : it->second;
        }
    }
}

std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

double mutual_information(std::span<const double> column, std::span<const int> targets) {
    return plugin_mi(column, targets);
}

double mutual_information(std::span<const int> x, std::span<const int> y) { return plugin_mi(x, y); }

SelectedBigrams select_top_k(const std::map<Bigram, std::vector<double>>& columns, std::span<const int> targets,
                             std::size_t k) {
    struct Scored {
        long long key;
        double mi;
        Bigram bigram;
    };
    std::vector<Scored> scored;
    scored.reserve(columns.size());
    for (const auto& [bigram, values] : columns) {
        double mi = mutual_information(values, targets);
        scored.push_back({std::llround(mi * 1e12), mi, bigram});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.bigram < b.bigram;
    });
    SelectedBigrams sel;
    for (std::size_t i = 0; i < scored.size() && i < k; ++i) {
        sel.bigrams.push_back(scored[i].bigram);
        sel.scores.push_back(scored[i].mi);
    }
    return sel;
}

SelectedBigrams fit_bigram_selection(const PrefixDataset& ds, std::span<const std::size_t> train_indices,
                                     std::size_t k) {
    std::vector<BigramCounts> counts;
    std::set<Bigram> universe;
    std::vector<int> targets;
    counts.reserve(train_indices.size());
    for (auto i : train_indices) {
        counts.push_back(count_2grams(ds.samples.at(i).prefix));
        for (const auto& [bigram, n] : counts.back()) universe.insert(bigram);
        targets.push_back(ds.samples[i].target);
    }
    std::map<Bigram, std::vector<double>> columns;
    for (const auto& bigram : universe) {
        auto& col = columns[bigram];
        col.reserve(counts.size());
        for (const auto& c : counts) {
            auto it = c.find(bigram);
            col.push_back(it == c.end() ? 0.0 : it->second);
        }
    }
    if (columns.empty()) return {};
    return select_top_k(columns, targets, k);
}

RunFeatures run_features(std::span<const int> prefix) {
    if (prefix.empty()) throw DataError("run features of an empty prefix");
    std::size_t runs = 1;
    for (std::size_t i = 1; i < prefix.size(); ++i)
        if (prefix[i] != prefix[i - 1]) ++runs;
    return {runs, static_cast<double>(prefix.size()) / static_cast<double>(runs)};
}

EncodedDataset encode_seq_only(const PrefixDataset& ds) { return with_sequence_columns(ds, Encoding::SeqOnly, 0); }

EncodedDataset encode_scap(const PrefixDataset& ds, const CapabilityMap& capabilities) {
    const std::size_t width = capabilities.alphabet.size();
    auto out = with_sequence_columns(ds, Encoding::SCap, width);
    for (const auto& a : capabilities.alphabet) out.feature_names.push_back("cap:" + a);
    for (std::size_t r = 0; r < ds.samples.size(); ++r) {
        auto it = capabilities.capabilities.find(ds.samples[r].resource_id);
        if (it == capabilities.capabilities.end())
            throw DataError("resource '" + ds.samples[r].resource_id + "' is missing from the capability map");
        for (std::size_t j = 0; j < width; ++j) out.rows(r, ds.prefix_length + j) = it->second[j];
    }
    return out;
}

EncodedDataset encode_s2g(const PrefixDataset& ds, const SelectedBigrams& selection) {
    auto out = with_sequence_columns(ds, Encoding::S2g, selection.bigrams.size());
    fill_bigram_columns(ds, selection, out, ds.prefix_length);
    return out;
}

EncodedDataset encode_s2gr(const PrefixDataset& ds, const SelectedBigrams& selection) {
    const std::size_t runs_at = ds.prefix_length + selection.bigrams.size();
    auto out = with_sequence_columns(ds, Encoding::S2gR, selection.bigrams.size() + 2);
    fill_bigram_columns(ds, selection, out, ds.prefix_length);
    out.feature_names.push_back("n_runs");
    out.feature_names.push_back("avg_run_length");
    for (std::size_t r = 0; r < ds.samples.size(); ++r) {
        auto rf = run_features(ds.samples[r].prefix);
        out.rows(r, runs_at) = static_cast<double>(rf.n_runs);
        out.rows(r, runs_at + 1) = rf.avg_run_length;
    }
    return out;
}

EncodedDataset encode(const PrefixDataset& ds, Encoding encoding, const EncodingInputs& inputs) {
    switch (encoding) {
        case Encoding::SeqOnly: return encode_seq_only(ds);
        case Encoding::SCap:
            if (!inputs.capabilities) throw ConfigError("SCap encoding needs a capability map");
            return encode_scap(ds, *inputs.capabilities);
        case Encoding::S2g:
        case Encoding::S2gR:
            if (!inputs.selection) throw ConfigError(std::string(to_string(encoding)) + " encoding needs a bigram selection");
            return encoding == Encoding::S2g ? encode_s2g(ds, *inputs.selection) : encode_s2gr(ds, *inputs.selection);
    }
    throw ConfigError("unhandled encoding");
}

void write_encoded_csv(std::ostream& out, const EncodedDataset& ds) {
    csv::Row header = ds.feature_names;
    header.push_back("target");
    csv::write_row(out, header);
    for (std::size_t r = 0; r < ds.rows.rows(); ++r) {
        csv::Row row;
        for (double v : ds.rows.row(r)) row.push_back(format_number(v));
        row.push_back(std::to_string(ds.targets[r]));
        csv::write_row(out, row);
    }
}

}  // namespace rcpm
