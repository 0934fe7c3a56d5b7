#include "rcpm/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "rcpm/error.hpp"
#include "rcpm/profiler.hpp"
#include "rcpm/seeding.hpp"

namespace rcpm {

PrefixDataset handle_rare_classes(const PrefixDataset& ds) {
    std::map<int, std::size_t> counts;
    for (const auto& s : ds.samples) ++counts[s.target];
    std::set<int> rare;
    for (const auto& [label, n] : counts)
        if (n == 1) rare.insert(label);

    PrefixDataset out = ds;
    if (rare.size() == 1) {
        int label = *rare.begin();
        auto it = std::find_if(ds.samples.begin(), ds.samples.end(), [&](const auto& s) { return s.target == label; });
        out.samples.push_back(*it);
    } else if (rare.size() > 1) {
        int placeholder = out.encoder.add(std::string(kRareLabel));
        for (auto& s : out.samples)
            if (rare.count(s.target)) s.target = placeholder;
    }
    return out;
}

SplitIndices stratified_split(std::span<const int> targets, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie strictly between 0 and 1");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < targets.size(); ++i) by_class[targets[i]].push_back(i);
    SplitIndices split;
    std::mt19937_64 rng(seed);
    for (auto& [label, members] : by_class) {
        const std::size_t n = members.size();
        if (n < 2)
            throw DataError("class " + std::to_string(label) + " has a single sample; apply rare-class handling first");
        std::shuffle(members.begin(), members.end(), rng);
        auto want = static_cast<std::size_t>(std::llround((1.0 - ratio) * static_cast<double>(n)));
        std::size_t n_test = std::clamp<std::size_t>(want, 1, n - 1);
        split.test.insert(split.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
        split.train.insert(split.train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw DataError("accuracy: prediction and truth differ in length");
    if (truth.empty()) throw DataError("accuracy of zero predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

void ExperimentConfig::validate() const {
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split_ratio must lie strictly between 0 and 1");
    if (encodings.empty()) throw ConfigError("at least one encoding is required");
    if (models.empty()) throw ConfigError("at least one model is required");
    if (cv_folds < 2) throw ConfigError("cv_folds must be at least 2");
    if (cell_timeout_seconds < 0.0) throw ConfigError("cell_timeout_seconds must be non-negative");
    for (std::size_t i = 0; i < candidate_lengths.size(); ++i) {
        if (candidate_lengths[i] == 0) throw ConfigError("prefix lengths must be positive");
        if (i && candidate_lengths[i] <= candidate_lengths[i - 1])
            throw ConfigError("prefix lengths must be strictly ascending");
    }
    for (const auto& [kind, grid] : grids) grid.points();
}

HyperGrid ExperimentConfig::grid_for(ModelKind kind) const {
    auto it = grids.find(kind);
    return it != grids.end() ? it->second : HyperGrid::for_model(kind);
}

bool record_order(const ResultRecord& a, const ResultRecord& b) {
    return std::tie(a.dataset, a.prefix_length, a.encoding, a.model) <
           std::tie(b.dataset, b.prefix_length, b.encoding, b.model);
}

std::vector<ResultRecord> run_experiment(const EventLog& log, const ExperimentConfig& cfg) {
    cfg.validate();
    const auto view = resource_view(log);
    const auto encoder = fit_label_encoder(log);
    const auto lengths = prefix_grid(view, cfg.candidate_lengths, cfg.min_resources);
    if (lengths.empty())
        throw DataError("no candidate prefix length keeps at least min_resources=" + std::to_string(cfg.min_resources) +
                        " eligible resources");

    auto uses = [&](Encoding e) { return std::find(cfg.encodings.begin(), cfg.encodings.end(), e) != cfg.encodings.end(); };
    CapabilityMap capabilities;
    if (uses(Encoding::SCap)) capabilities = capability_map(log);
    const bool needs_selection = uses(Encoding::S2g) || uses(Encoding::S2gR);

    std::vector<ResultRecord> records;
    for (std::size_t length : lengths) {
        const auto ds = handle_rare_classes(build_prefix_dataset(view, length, encoder));
        const auto targets = ds.targets();
        const auto split = stratified_split(targets, cfg.split_ratio, derive_seed(cfg.seed, "split", length));

        std::vector<std::vector<int>> train_prefixes;
        std::vector<std::vector<int>> test_prefixes;
        for (auto i : split.train) train_prefixes.push_back(ds.samples[i].prefix);
        for (auto i : split.test) test_prefixes.push_back(ds.samples[i].prefix);
        const double leakage =
            example_leakage<std::vector<int>>(train_prefixes, test_prefixes).leaked_fraction;

        SelectedBigrams selection;
        if (needs_selection) selection = fit_bigram_selection(ds, split.train, cfg.mi_k);
        const EncodingInputs inputs{&capabilities, &selection};
        const auto y_train = select<int>(targets, split.train);
        const auto y_test = select<int>(targets, split.test);

        for (Encoding encoding : cfg.encodings) {
            const auto encoded = encode(ds, encoding, inputs);
            const auto x_train = encoded.rows.select_rows(split.train);
            const auto x_test = encoded.rows.select_rows(split.test);
            for (ModelKind kind : cfg.models) {
                ResultRecord rec;
                rec.dataset = cfg.dataset_id;
                rec.model = kind;
                rec.encoding = encoding;
                rec.prefix_length = length;
                rec.n_train = split.train.size();
                rec.n_test = split.test.size();
                rec.leakage_fraction = leakage;

                GridSearchOptions opts;
                opts.folds = cfg.cv_folds;
                opts.workers = cfg.workers;
                opts.label_names = ds.encoder.labels();
                if (cfg.cell_timeout_seconds > 0.0)
                    opts.deadline = Deadline(std::chrono::duration<double>(cfg.cell_timeout_seconds));

                auto started = std::chrono::steady_clock::now();
                try {
                    auto outcome = grid_search_cv(kind, x_train, y_train, cfg.grid_for(kind),
                                                  derive_seed(cfg.seed, "model", length), opts);
                    rec.accuracy = accuracy(predict(outcome.model, x_test), y_test);
                    rec.best_params = outcome.best_params;
                    rec.cv_accuracy = outcome.mean_fold_accuracy;
                } catch (const Error& e) {
                    rec.failed = true;
                    rec.error = e.what();
                }
                rec.wall_time_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
                records.push_back(std::move(rec));
            }
        }
    }
    std::stable_sort(records.begin(), records.end(), record_order);
    return records;
}

namespace {

AggregateRow summarise(const std::string& dataset, ModelKind model, Encoding encoding, const std::vector<double>& v) {
    AggregateRow row{dataset, model, encoding, v.size(), 0.0, 0.0};
    for (double x : v) row.mean += x;
    row.mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - row.mean) * (x - row.mean);
    row.std = std::sqrt(var / static_cast<double>(v.size()));
    return row;
}

}  // namespace

AggregateTable aggregate(std::span<const ResultRecord> records) {
    using Key = std::tuple<std::string, ModelKind, Encoding>;
    std::map<Key, std::vector<double>> accuracies;
    std::map<Key, std::vector<double>> improvements;
    std::map<std::tuple<std::string, ModelKind, std::size_t>, double> baseline;

    for (const auto& r : records) {
        if (r.failed) continue;
        if (r.encoding == Encoding::SeqOnly) baseline[{r.dataset, r.model, r.prefix_length}] = r.accuracy;
    }
    for (const auto& r : records) {
        if (r.failed) continue;
        Key key{r.dataset, r.model, r.encoding};
        accuracies[key].push_back(r.accuracy);
        auto it = baseline.find({r.dataset, r.model, r.prefix_length});
        if (it != baseline.end()) improvements[key].push_back(r.accuracy - it->second);
    }
    AggregateTable table;
    for (const auto& [key, v] : accuracies)
        table.accuracy.push_back(summarise(std::get<0>(key), std::get<1>(key), std::get<2>(key), v));
    for (const auto& [key, v] : improvements)
        table.improvement.push_back(summarise(std::get<0>(key), std::get<1>(key), std::get<2>(key), v));
    return table;
}

}  // namespace rcpm
