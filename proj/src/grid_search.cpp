#include <algorithm>
#include <map>
#include <random>

#include "rcpm/error.hpp"
#include "rcpm/learners.hpp"
#include "rcpm/parallel.hpp"
#include "rcpm/seeding.hpp"

namespace rcpm {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Majority: return "majority";
        case ModelKind::Tree: return "tree";
        case ModelKind::Forest: return "forest";
        case ModelKind::Boosted: return "boosted";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    for (auto k : {ModelKind::Majority, ModelKind::Tree, ModelKind::Forest, ModelKind::Boosted})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown model '" + std::string(name) + "' (expected majority, tree, forest or boosted)");
}

std::string to_string(const ParamValue& v) {
    if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v));
    return buf;
}

std::string to_string(const ParamAssignment& a) {
    std::string out = "{";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += a[i].first + "=" + to_string(a[i].second);
    }
    return out + "}";
}

std::vector<ParamAssignment> HyperGrid::points() const {
    std::vector<ParamAssignment> out{ParamAssignment{}};
    for (const auto& [name, values] : axes) {
        if (values.empty()) throw ConfigError("hyperparameter '" + name + "' has no candidate values");
        std::vector<ParamAssignment> next;
        next.reserve(out.size() * values.size());
        for (const auto& prefix : out) {
            for (const auto& v : values) {
                auto p = prefix;
                p.emplace_back(name, v);
                next.push_back(std::move(p));
            }
        }
        out = std::move(next);
    }
    return out;
}

HyperGrid HyperGrid::random_forest_default() {
    using I = std::int64_t;
    return {{
        {"n_estimators", {I{50}, I{100}, I{200}, I{300}}},
        {"max_depth", {I{kUnlimitedDepth}, I{10}, I{20}, I{30}}},
        {"min_samples_split", {I{2}, I{5}, I{10}}},
        {"min_samples_leaf", {I{1}, I{2}, I{4}}},
        {"bootstrap", {true, false}},
    }};
}

HyperGrid HyperGrid::boosted_default() {
    using I = std::int64_t;
    return {{
        {"n_estimators", {I{50}, I{100}, I{200}}},
        {"max_depth", {I{kUnlimitedDepth}, I{10}, I{20}}},
        {"learning_rate", {0.05, 0.1}},
        {"subsample", {0.8, 1.0}},
        {"colsample", {0.8, 1.0}},
    }};
}

HyperGrid HyperGrid::for_model(ModelKind kind) {
    switch (kind) {
        case ModelKind::Forest: return random_forest_default();
        case ModelKind::Boosted: return boosted_default();
        default: return {};
    }
}

namespace {

std::int64_t as_int(const std::string& key, const ParamValue& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return *i;
    throw ConfigError("hyperparameter '" + key + "' must be an integer");
}

std::size_t as_count(const std::string& key, const ParamValue& v) {
    auto i = as_int(key, v);
    if (i < 1) throw ConfigError("hyperparameter '" + key + "' must be positive");
    return static_cast<std::size_t>(i);
}

int as_depth(const std::string& key, const ParamValue& v) {
    auto i = as_int(key, v);
    if (i < 0) return kUnlimitedDepth;  // None and -1 both mean unlimited
    return static_cast<int>(i);
}

double as_real(const std::string& key, const ParamValue& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    throw ConfigError("hyperparameter '" + key + "' must be a number");
}

bool as_bool(const std::string& key, const ParamValue& v) {
    if (auto b = std::get_if<bool>(&v)) return *b;
    throw ConfigError("hyperparameter '" + key + "' must be a boolean");
}

[[noreturn]] void unknown(const std::string& key, const char* model) {
    throw ConfigError("unknown " + std::string(model) + " hyperparameter '" + key + "'");
}

}  // namespace

ForestParams forest_params(const ParamAssignment& a) {
    ForestParams p;
    for (const auto& [key, v] : a) {
        if (key == "n_estimators") p.n_estimators = as_count(key, v);
        else if (key == "max_depth") p.max_depth = as_depth(key, v);
        else if (key == "min_samples_split") p.min_samples_split = as_count(key, v);
        else if (key == "min_samples_leaf") p.min_samples_leaf = as_count(key, v);
        else if (key == "bootstrap") p.bootstrap = as_bool(key, v);
        else if (key == "max_features") p.max_features = as_count(key, v);
        else unknown(key, "forest");
    }
    return p;
}

BoostParams boost_params(const ParamAssignment& a) {
    BoostParams p;
    for (const auto& [key, v] : a) {
        if (key == "n_estimators") p.n_estimators = as_count(key, v);
        else if (key == "max_depth") p.max_depth = as_depth(key, v);
        else if (key == "learning_rate") p.learning_rate = as_real(key, v);
        else if (key == "subsample") p.subsample = as_real(key, v);
        else if (key == "colsample" || key == "colsample_bytree") p.colsample = as_real(key, v);
        else if (key == "l2_regularization") p.l2_regularization = as_real(key, v);
        else if (key == "min_child_weight") p.min_child_weight = as_real(key, v);
        else if (key == "min_samples_leaf") p.min_samples_leaf = as_count(key, v);
        else unknown(key, "boosted");
    }
    return p;
}

TreeParams tree_params(const ParamAssignment& a) {
    TreeParams p;
    for (const auto& [key, v] : a) {
        if (key == "max_depth") p.max_depth = as_depth(key, v);
        else if (key == "min_samples_split") p.min_samples_split = as_count(key, v);
        else if (key == "min_samples_leaf") p.min_samples_leaf = as_count(key, v);
        else if (key == "max_features") p.max_features = as_count(key, v);
        else unknown(key, "tree");
    }
    return p;
}

TrainedClassifier train_model(ModelKind kind, const Matrix& x, std::span<const int> y, const ParamAssignment& params,
                              std::uint64_t seed, std::span<const std::string> label_names, const Deadline& deadline) {
    switch (kind) {
        case ModelKind::Majority:
            if (!params.empty()) throw ConfigError("the majority model takes no hyperparameters");
            return train_majority(y, label_names);
        case ModelKind::Tree: {
            auto p = tree_params(params);
            p.seed = seed;
            return train_tree(x, y, p, deadline);
        }
        case ModelKind::Forest: return train_random_forest(x, y, forest_params(params), seed, deadline);
        case ModelKind::Boosted: return train_gradient_boosted(x, y, boost_params(params), seed, deadline);
    }
    throw ConfigError("unknown model kind");
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (y.size() < folds)
        throw DataError("cannot split " + std::to_string(y.size()) + " samples into " + std::to_string(folds) + " folds");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
    std::vector<std::vector<std::size_t>> out(folds);
    std::mt19937_64 rng(seed);
    std::size_t dealer = 0;
    for (auto& [label, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (auto i : members) out[dealer++ % folds].push_back(i);
    }
    for (auto& f : out) std::sort(f.begin(), f.end());
    return out;
}

CVOutcome grid_search_cv(ModelKind kind, const Matrix& x, std::span<const int> y, const HyperGrid& grid,
                         std::uint64_t seed, const GridSearchOptions& options) {
    if (x.rows() != y.size()) throw DataError("feature matrix and targets differ in length");
    const auto points = grid.points();
    const auto folds = stratified_folds(y, options.folds, derive_seed(seed, "cv-folds"));

    struct FoldData {
        Matrix x_train;
        std::vector<int> y_train;
        Matrix x_test;
        std::vector<int> y_test;
    };
    std::vector<FoldData> data(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        std::sort(train.begin(), train.end());
        data[f].x_train = x.select_rows(train);
        data[f].y_train = select<int>(y, train);
        data[f].x_test = x.select_rows(folds[f]);
        data[f].y_test = select<int>(y, folds[f]);
    }

    std::vector<std::vector<double>> scores(points.size(), std::vector<double>(folds.size(), 0.0));
    parallel_for(points.size(), options.workers, [&](std::size_t p) {
        for (std::size_t f = 0; f < folds.size(); ++f) {
            options.deadline.check();
            const auto& d = data[f];
            auto model = train_model(kind, d.x_train, d.y_train, points[p], derive_seed(seed, "cv-model", f),
                                     options.label_names, options.deadline);
            auto pred = predict(model, d.x_test);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == d.y_test[i];
            scores[p][f] = static_cast<double>(hits) / static_cast<double>(pred.size());
        }
    });

    std::size_t best = 0;
    double best_mean = -1.0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        double mean = 0.0;
        for (double s : scores[p]) mean += s;
        mean /= static_cast<double>(scores[p].size());
        if (mean > best_mean + 1e-12) {
            best_mean = mean;
            best = p;
        }
    }
    CVOutcome out;
    out.best_params = points[best];
    out.per_fold = scores[best];
    out.mean_fold_accuracy = best_mean;
    out.model = train_model(kind, x, y, out.best_params, derive_seed(seed, "refit"), options.label_names,
                            options.deadline);
    return out;
}

}  // namespace rcpm
