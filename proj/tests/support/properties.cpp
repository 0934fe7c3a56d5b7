#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "oracles.hpp"
#include "rcpm/encoders.hpp"
#include "rcpm/evaluation.hpp"
#include "rcpm/learners.hpp"
#include "rcpm/profiler.hpp"

namespace props {
namespace {

using Rng = std::mt19937_64;
using Check = std::function<std::optional<std::string>(Rng&)>;

Outcome run(std::string name, std::size_t cases, std::uint64_t seed, const Check& check) {
    Outcome out{std::move(name), cases, 0, {}};
    Rng rng(seed);
    for (std::size_t i = 0; i < cases; ++i) {
        std::optional<std::string> failure;
        try {
            failure = check(rng);
        } catch (const std::exception& e) {
            failure = std::string("exception: ") + e.what();
        }
        if (failure) {
            if (!out.failures) out.first_failure = "case " + std::to_string(i) + ": " + *failure;
            ++out.failures;
        }
    }
    return out;
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<int> random_ints(Rng& rng, std::size_t n, int max_value) {
    std::vector<int> v(n);
    for (auto& x : v) x = static_cast<int>(uniform(rng, 0, static_cast<std::size_t>(max_value)));
    return v;
}

std::vector<std::string> random_activities(Rng& rng, std::size_t n, std::size_t alphabet) {
    std::vector<std::string> v(n);
    for (auto& a : v) a = std::string(1, static_cast<char>('A' + uniform(rng, 0, alphabet - 1)));
    return v;
}

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

}  // namespace

Outcome split_partition(std::size_t cases, std::uint64_t seed) {
    return run("split partition and per-class proportions", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        std::vector<int> targets;
        std::size_t classes = uniform(rng, 1, 6);
        for (std::size_t c = 0; c < classes; ++c) {
            std::size_t n = uniform(rng, 2, 40);
            for (std::size_t i = 0; i < n; ++i) targets.push_back(static_cast<int>(c) * 3);
        }
        std::shuffle(targets.begin(), targets.end(), rng);
        auto split = rcpm::stratified_split(targets, 0.8, rng());
        std::vector<int> seen(targets.size(), 0);
        for (auto i : split.train) ++seen[i];
        for (auto i : split.test) ++seen[i];
        if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; }))
            return "an index is missing or appears twice";
        if (!std::is_sorted(split.train.begin(), split.train.end()) || !std::is_sorted(split.test.begin(), split.test.end()))
            return "split indices are not ascending";
        std::map<int, std::size_t> total;
        std::map<int, std::size_t> test;
        for (int t : targets) ++total[t];
        for (auto i : split.test) ++test[targets[i]];
        for (auto [label, n] : total) {
            auto want = std::max<long long>(1, std::llround(0.2 * static_cast<double>(n)));
            if (static_cast<long long>(test[label]) != want)
                return "class of " + std::to_string(n) + " got " + std::to_string(test[label]) + " test members";
        }
        return std::nullopt;
    });
}

Outcome rare_class_rules(std::size_t cases, std::uint64_t seed) {
    return run("rare-class rules", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        rcpm::PrefixDataset ds;
        ds.prefix_length = 2;
        ds.encoder = rcpm::LabelEncoder({"A", "B", "C", "D", "E", "F"});
        std::size_t n = uniform(rng, 1, 20);
        for (std::size_t i = 0; i < n; ++i)
            ds.samples.push_back({"r" + std::to_string(i), random_ints(rng, 2, 5), static_cast<int>(uniform(rng, 0, 5))});
        std::map<int, std::size_t> before;
        for (const auto& s : ds.samples) ++before[s.target];
        std::size_t singletons = 0;
        for (auto [label, c] : before) singletons += c == 1;

        auto out = rcpm::handle_rare_classes(ds);
        std::map<int, std::size_t> after;
        for (const auto& s : out.samples) ++after[s.target];
        if (std::any_of(after.begin(), after.end(), [](auto& kv) { return kv.second < 2; }) && out.samples.size() > 1)
            return "a singleton class survived";
        if (singletons == 0 && !(out == ds)) return "dataset without singletons changed";
        if (singletons == 1) {
            if (out.samples.size() != ds.samples.size() + 1) return "single rare class was not duplicated";
            if (!std::equal(ds.samples.begin(), ds.samples.end(), out.samples.begin())) return "original samples altered";
            if (before[out.samples.back().target] != 1) return "duplicated sample is not the rare one";
        }
        if (singletons >= 2) {
            if (out.samples.size() != ds.samples.size()) return "relabelling changed the sample count";
            if (!out.encoder.contains(std::string(rcpm::kRareLabel))) return "placeholder missing from encoder";
            int rare = out.encoder.encode(std::string(rcpm::kRareLabel));
            if (after[rare] != singletons) return "placeholder count differs from number of singleton classes";
            for (std::size_t i = 0; i < ds.samples.size(); ++i) {
                bool was_rare = before[ds.samples[i].target] == 1;
                int expect = was_rare ? rare : ds.samples[i].target;
                if (out.samples[i].target != expect || out.samples[i].prefix != ds.samples[i].prefix)
                    return "sample " + std::to_string(i) + " relabelled incorrectly";
            }
        }
        return std::nullopt;
    });
}

Outcome run_feature_identity(std::size_t cases, std::uint64_t seed) {
    return run("n_runs * avg_run_length = L", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        auto prefix = random_ints(rng, uniform(rng, 1, 60), static_cast<int>(uniform(rng, 0, 4)));
        auto f = rcpm::run_features(prefix);
        if (!close(static_cast<double>(f.n_runs) * f.avg_run_length, static_cast<double>(prefix.size())))
            return "identity violated";
        auto [blocks, avg] = oracle::runs(prefix);
        if (f.n_runs != blocks || !close(f.avg_run_length, avg)) return "disagrees with the run oracle";
        return std::nullopt;
    });
}

Outcome bigram_counts(std::size_t cases, std::uint64_t seed) {
    return run("sum of 2-gram counts = L - 1", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        auto prefix = random_ints(rng, uniform(rng, 1, 60), static_cast<int>(uniform(rng, 0, 5)));
        auto counts = rcpm::count_2grams(prefix);
        long long sum = 0;
        for (const auto& [bigram, c] : counts) sum += c;
        if (sum != static_cast<long long>(prefix.size()) - 1) return "sum is " + std::to_string(sum);
        std::map<std::string, int> as_text;
        for (const auto& [bigram, c] : counts)
            as_text[std::to_string(bigram.first) + ">" + std::to_string(bigram.second)] = c;
        if (as_text != oracle::bigrams(prefix)) return "disagrees with the bigram oracle";
        return std::nullopt;
    });
}

Outcome mutual_information_laws(std::size_t cases, std::uint64_t seed) {
    return run("MI non-negativity, symmetry, recoding invariance", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        std::size_t n = uniform(rng, 1, 80);
        auto x = random_ints(rng, n, static_cast<int>(uniform(rng, 0, 5)));
        auto y = random_ints(rng, n, static_cast<int>(uniform(rng, 0, 4)));
        double xy = rcpm::mutual_information(x, y);
        double yx = rcpm::mutual_information(y, x);
        if (xy < 0.0) return "negative MI";
        if (!close(xy, yx, 1e-12)) return "asymmetric MI";
        std::vector<double> column;
        for (int v : x) column.push_back(static_cast<double>(v) * 7.5 - 3.0);  // bijective recoding
        if (!close(rcpm::mutual_information(column, y), xy, 1e-12)) return "recoding changed MI";
        std::vector<long long> lx(x.begin(), x.end());
        std::vector<long long> ly(y.begin(), y.end());
        if (!close(xy, std::max(0.0, oracle::mutual_information(lx, ly)), 1e-9)) return "disagrees with the entropy oracle";
        return std::nullopt;
    });
}

Outcome seeded_determinism(std::size_t cases, std::uint64_t seed) {
    return run("determinism under fixed seed", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        std::size_t n = uniform(rng, 4, 30);
        std::size_t d = uniform(rng, 1, 4);
        rcpm::Matrix x(n, d);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < d; ++c) x(r, c) = static_cast<double>(uniform(rng, 0, 4));
        auto y = random_ints(rng, n, 2);
        std::uint64_t s = rng();
        rcpm::ForestParams fp;
        fp.n_estimators = 5;
        auto f1 = rcpm::train_random_forest(x, y, fp, s);
        auto f2 = rcpm::train_random_forest(x, y, fp, s);
        if (!(f1 == f2)) return "forest differs between runs";
        rcpm::BoostParams bp;
        bp.n_estimators = 3;
        bp.subsample = 0.8;
        bp.colsample = 0.8;
        if (!(rcpm::train_gradient_boosted(x, y, bp, s) == rcpm::train_gradient_boosted(x, y, bp, s)))
            return "boosted model differs between runs";
        std::vector<int> t;
        for (std::size_t i = 0; i < n; ++i) t.push_back(static_cast<int>(i % 2));
        auto a = rcpm::stratified_split(t, 0.8, s);
        auto b = rcpm::stratified_split(t, 0.8, s);
        if (a.train != b.train || a.test != b.test) return "split differs between runs";
        return std::nullopt;
    });
}

Outcome sequence_metrics(std::size_t cases, std::uint64_t seed) {
    return run("specialization, repetition and variant ratio match oracles", cases, seed,
               [](Rng& rng) -> std::optional<std::string> {
                   std::size_t alphabet = uniform(rng, 1, 6);
                   rcpm::SequenceView view;
                   std::size_t keys = uniform(rng, 1, 8);
                   for (std::size_t k = 0; k < keys; ++k)
                       view.sequences["k" + std::to_string(k)] = random_activities(rng, uniform(rng, 1, 6), alphabet);
                   for (const auto& [key, seq] : view.sequences) {
                       double s = rcpm::specialization(seq, alphabet);
                       if (!close(s, oracle::specialization(seq, alphabet))) return "specialization mismatch";
                       if (s < -1e-12 || s > 1.0 + 1e-12) return "specialization outside [0, 1]";
                       if (!close(rcpm::repetition(seq), oracle::repetition(seq))) return "repetition mismatch";
                   }
                   if (!close(rcpm::variant_ratio(view), oracle::variant_ratio(view.sequences)))
                       return "variant ratio mismatch";
                   return std::nullopt;
               });
}

Outcome view_ordering(std::size_t cases, std::uint64_t seed) {
    return run("views cover all events in (timestamp, file_order) order", cases, seed,
               [](Rng& rng) -> std::optional<std::string> {
                   std::vector<rcpm::Event> events;
                   std::size_t n = uniform(rng, 1, 40);
                   std::vector<std::size_t> orders(n);
                   for (std::size_t i = 0; i < n; ++i) orders[i] = i * 2 + 1;
                   std::shuffle(orders.begin(), orders.end(), rng);
                   for (std::size_t i = 0; i < n; ++i) {
                       rcpm::Event e;
                       e.case_id = "c" + std::to_string(uniform(rng, 0, 4));
                       e.resource = "r" + std::to_string(uniform(rng, 0, 4));
                       e.activity = std::string(1, static_cast<char>('A' + uniform(rng, 0, 3)));
                       e.timestamp = rcpm::Timestamp{std::chrono::seconds(uniform(rng, 0, 5))};
                       e.file_order = orders[i];
                       events.push_back(e);
                   }
                   auto log = rcpm::EventLog::from_events(events);
                   std::set<std::string> alphabet;
                   for (const auto& e : events) alphabet.insert(e.activity);
                   if (std::vector<std::string>(alphabet.begin(), alphabet.end()) != log.activity_alphabet)
                       return "alphabet differs from the event activities";
                   auto rv = rcpm::resource_view(log);
                   auto cv = rcpm::case_view(log);
                   if (rv.event_count() != n || cv.event_count() != n) return "views lose events";
                   auto sorted = events;
                   std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
                       return std::tie(a.timestamp, a.file_order) < std::tie(b.timestamp, b.file_order);
                   });
                   std::map<std::string, std::vector<std::string>> expect_r;
                   std::map<std::string, std::vector<std::string>> expect_c;
                   for (const auto& e : sorted) {
                       expect_r[e.resource].push_back(e.activity);
                       expect_c[e.case_id].push_back(e.activity);
                   }
                   if (rv.sequences != expect_r) return "resource view order differs";
                   if (cv.sequences != expect_c) return "case view order differs";
                   return std::nullopt;
               });
}

Outcome prefix_extraction(std::size_t cases, std::uint64_t seed) {
    return run("prefixes are sequence heads with the next activity as target", cases, seed,
               [](Rng& rng) -> std::optional<std::string> {
                   rcpm::SequenceView view;
                   std::size_t keys = uniform(rng, 1, 10);
                   for (std::size_t k = 0; k < keys; ++k)
                       view.sequences["r" + std::to_string(k)] = random_activities(rng, uniform(rng, 1, 12), 4);
                   rcpm::LabelEncoder enc({"A", "B", "C", "D"});
                   std::size_t length = uniform(rng, 1, 10);
                   auto eligible = rcpm::eligible_resources(view, length);
                   std::size_t expected = 0;
                   for (const auto& [k, s] : view.sequences) expected += s.size() >= length + 1;
                   if (eligible.size() != expected) return "eligibility count";
                   if (eligible.empty()) return std::nullopt;
                   auto ds = rcpm::build_prefix_dataset(view, length, enc);
                   if (ds.samples.size() != eligible.size()) return "one sample per eligible key expected";
                   for (const auto& s : ds.samples) {
                       const auto& seq = view.sequences.at(s.resource_id);
                       if (s.prefix.size() != length) return "prefix length";
                       for (std::size_t i = 0; i < length; ++i)
                           if (enc.decode(s.prefix[i]) != seq[i]) return "prefix content";
                       if (enc.decode(s.target) != seq[length]) return "target";
                   }
                   return std::nullopt;
               });
}

Outcome majority_accuracy(std::size_t cases, std::uint64_t seed) {
    return run("majority accuracy = test frequency of the train majority", cases, seed,
               [](Rng& rng) -> std::optional<std::string> {
                   auto train = random_ints(rng, uniform(rng, 1, 30), 3);
                   auto test = random_ints(rng, uniform(rng, 1, 30), 3);
                   std::map<int, std::size_t> counts;
                   for (int t : train) ++counts[t];
                   int best = counts.begin()->first;
                   for (auto [label, c] : counts)
                       if (c > counts[best]) best = label;
                   double freq = static_cast<double>(std::count(test.begin(), test.end(), best)) /
                                 static_cast<double>(test.size());
                   if (!close(rcpm::majority_class_accuracy<int>(train, test), freq)) return "profiler baseline";
                   auto model = rcpm::train_majority(train);
                   rcpm::Matrix x(test.size(), 1);
                   if (!close(rcpm::accuracy(rcpm::predict(model, x), test), freq)) return "majority learner";
                   return std::nullopt;
               });
}

Outcome constant_aggregate(std::size_t cases, std::uint64_t seed) {
    return run("aggregate of constant accuracies", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        double value = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        std::vector<rcpm::ResultRecord> records;
        std::size_t lengths = uniform(rng, 1, 8);
        for (std::size_t l = 0; l < lengths; ++l)
            for (auto e : rcpm::all_encodings()) {
                rcpm::ResultRecord r;
                r.dataset = "d";
                r.model = rcpm::ModelKind::Forest;
                r.encoding = e;
                r.prefix_length = 5 * (l + 1);
                r.accuracy = value;
                records.push_back(r);
            }
        auto table = rcpm::aggregate(records);
        for (const auto& row : table.accuracy)
            if (row.n != lengths || !close(row.mean, value, 1e-12) || !close(row.std, 0.0, 1e-12)) return "accuracy row";
        for (const auto& row : table.improvement)
            if (!close(row.mean, 0.0, 1e-12) || !close(row.std, 0.0, 1e-12)) return "improvement row";
        return std::nullopt;
    });
}

Outcome tree_root_oracle(std::size_t cases, std::uint64_t seed) {
    return run("tree root split equals brute-force minimum Gini", cases, seed, [](Rng& rng) -> std::optional<std::string> {
        std::size_t n = uniform(rng, 1, 8);
        std::size_t d = uniform(rng, 1, 2);
        std::size_t k = uniform(rng, 1, 3);
        bool coarse = uniform(rng, 0, 1) == 0;  // coarse values create threshold and impurity ties
        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        for (auto& row : rows)
            for (auto& v : row)
                v = coarse ? static_cast<double>(uniform(rng, 0, 3))
                           : std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
        auto y = random_ints(rng, n, static_cast<int>(k - 1));
        auto expect = oracle::brute_force_root(rows, y);
        rcpm::TreeParams p;
        p.max_depth = 1;
        auto model = rcpm::train_tree(rcpm::Matrix::from_rows(rows), y, p);
        const auto& root = model.trees.front().nodes.front();
        if (expect.leaf != root.is_leaf()) return expect.leaf ? "oracle leaf, tree split" : "oracle split, tree leaf";
        if (expect.leaf) return std::nullopt;
        if (root.feature != expect.feature || std::fabs(root.threshold - expect.threshold) > 1e-12)
            return "tree (" + std::to_string(root.feature) + ", " + std::to_string(root.threshold) + ") vs oracle (" +
                   std::to_string(expect.feature) + ", " + std::to_string(expect.threshold) + ")";
        return std::nullopt;
    });
}

std::vector<Outcome> all(std::size_t cases, std::uint64_t seed) {
    return {split_partition(cases, seed),       rare_class_rules(cases, seed + 1),
            run_feature_identity(cases, seed + 2), bigram_counts(cases, seed + 3),
            mutual_information_laws(cases, seed + 4), seeded_determinism(cases, seed + 5),
            sequence_metrics(cases, seed + 6),    view_ordering(cases, seed + 7),
            prefix_extraction(cases, seed + 8),   majority_accuracy(cases, seed + 9),
            constant_aggregate(cases, seed + 10)};
}

}  // namespace props
