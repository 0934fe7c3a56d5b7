#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rcpm/error.hpp"
#include "rcpm/learners.hpp"
#include "rcpm/seeding.hpp"
#include "tree_builders.hpp"

namespace rcpm {
namespace {

void check_training_data(const Matrix& x, std::span<const int> y) {
    if (x.rows() == 0 || y.empty()) throw DataError("cannot train on empty data");
    if (x.rows() != y.size()) throw DataError("feature matrix and targets differ in length");
}

std::size_t sqrt_features(std::size_t n_features) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_features)))));
}

void softmax_inplace(std::vector<double>& scores) {
    double hi = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - hi);
        sum += s;
    }
    for (double& s : scores) s /= sum;
}

}  // namespace

TrainedClassifier train_random_forest(const Matrix& x, std::span<const int> y, const ForestParams& params,
                                      std::uint64_t seed, const Deadline& deadline) {
    check_training_data(x, y);
    if (params.n_estimators == 0) throw ConfigError("n_estimators must be positive");
    TrainedClassifier model;
    model.kind = ModelKind::Forest;
    model.label_space = detail::sorted_labels(y);
    model.seed = seed;
    model.n_features = x.cols();
    auto slots = detail::to_slots(y, model.label_space);

    TreeParams tp;
    tp.max_depth = params.max_depth;
    tp.min_samples_split = params.min_samples_split;
    tp.min_samples_leaf = params.min_samples_leaf;
    tp.max_features = params.max_features.value_or(sqrt_features(x.cols()));

    const std::size_t n = x.rows();
    model.trees.reserve(params.n_estimators);
    for (std::size_t t = 0; t < params.n_estimators; ++t) {
        deadline.check();
        tp.seed = derive_seed(seed, "forest-tree", t);
        std::vector<std::size_t> rows(n);
        if (params.bootstrap) {
            std::mt19937_64 rng(derive_seed(seed, "forest-bootstrap", t));
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (auto& r : rows) r = pick(rng);
            std::sort(rows.begin(), rows.end());
        } else {
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        detail::GiniTreeBuilder builder(x, slots, model.label_space.size(), tp, deadline);
        model.trees.push_back(builder.build(std::move(rows)));
    }
    return model;
}

TrainedClassifier train_gradient_boosted(const Matrix& x, std::span<const int> y, const BoostParams& params,
                                         std::uint64_t seed, const Deadline& deadline) {
    check_training_data(x, y);
    if (params.subsample <= 0.0 || params.subsample > 1.0) throw ConfigError("subsample must lie in (0, 1]");
    if (params.colsample <= 0.0 || params.colsample > 1.0) throw ConfigError("colsample must lie in (0, 1]");
    if (params.learning_rate < 0.0) throw ConfigError("learning_rate must be non-negative");

    TrainedClassifier model;
    model.kind = ModelKind::Boosted;
    model.label_space = detail::sorted_labels(y);
    model.seed = seed;
    model.n_features = x.cols();
    model.learning_rate = params.learning_rate;
    const std::size_t k = model.label_space.size();
    const std::size_t n = x.rows();
    auto slots = detail::to_slots(y, model.label_space);

    std::vector<double> prior(k, 0.0);
    for (int s : slots) prior[static_cast<std::size_t>(s)] += 1.0;
    model.base_scores.resize(k);
    for (std::size_t c = 0; c < k; ++c) model.base_scores[c] = std::log(prior[c] / static_cast<double>(n));
    if (k == 1) return model;

    std::vector<std::vector<double>> scores(n, model.base_scores);
    std::vector<double> grad(n);
    std::vector<double> hess(n);
    std::vector<std::vector<double>> prob(n);
    const double hess_factor = static_cast<double>(k) / static_cast<double>(k - 1);
    const std::size_t n_rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.subsample * n)));
    const std::size_t n_cols =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.colsample * x.cols())));

    std::vector<std::size_t> all_rows(n);
    std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
    std::vector<std::size_t> all_cols(x.cols());
    std::iota(all_cols.begin(), all_cols.end(), std::size_t{0});

    model.trees.reserve(params.n_estimators * k);
    for (std::size_t round = 0; round < params.n_estimators; ++round) {
        deadline.check();
        for (std::size_t i = 0; i < n; ++i) {
            prob[i] = scores[i];
            softmax_inplace(prob[i]);
        }
        std::vector<std::size_t> rows = all_rows;
        if (n_rows < n) {
            std::mt19937_64 rng(derive_seed(seed, "boost-rows", round));
            std::shuffle(rows.begin(), rows.end(), rng);
            rows.resize(n_rows);
            std::sort(rows.begin(), rows.end());
        }
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t i = 0; i < n; ++i) {
                double p = prob[i][c];
                grad[i] = p - (static_cast<std::size_t>(slots[i]) == c ? 1.0 : 0.0);
                hess[i] = std::max(hess_factor * p * (1.0 - p), 1e-16);
            }
            std::vector<std::size_t> cols = all_cols;
            if (n_cols < cols.size()) {
                std::mt19937_64 rng(derive_seed(seed, "boost-cols", round * k + c));
                std::shuffle(cols.begin(), cols.end(), rng);
                cols.resize(n_cols);
                std::sort(cols.begin(), cols.end());
            }
            detail::NewtonTreeBuilder builder(x, grad, hess, cols, params);
            model.trees.push_back(builder.build(rows));
        }
        // scores move only after all class trees of the round are fit
        for (std::size_t c = 0; c < k; ++c) {
            const Tree& tree = model.trees[round * k + c];
            for (std::size_t i = 0; i < n; ++i)
                scores[i][c] += params.learning_rate * tree.leaf_for(x.row(i)).value[0];
        }
        ++model.rounds;
    }
    return model;
}

int TrainedClassifier::predict_row(std::span<const double> row) const {
    if (label_space.empty()) throw DataError("model has no label space");
    switch (kind) {
        case ModelKind::Majority: return majority_label;
        case ModelKind::Tree:
        case ModelKind::Forest: {
            if (trees.size() == 1) {
                const auto& counts = trees[0].leaf_for(row).value;
                return label_space[detail::argmax(counts)];
            }
            std::vector<double> votes(label_space.size(), 0.0);
            for (const auto& tree : trees) votes[detail::argmax(tree.leaf_for(row).value)] += 1.0;
            return label_space[detail::argmax(votes)];
        }
        case ModelKind::Boosted: {
            const std::size_t k = label_space.size();
            std::vector<double> s = base_scores;
            for (std::size_t r = 0; r < rounds; ++r)
                for (std::size_t c = 0; c < k; ++c) s[c] += learning_rate * trees[r * k + c].leaf_for(row).value[0];
            return label_space[detail::argmax(s)];
        }
    }
    throw DataError("unknown model kind");
}

std::vector<int> predict(const TrainedClassifier& model, const Matrix& x) {
    if (model.kind != ModelKind::Majority && x.cols() != model.n_features)
        throw DataError("model expects " + std::to_string(model.n_features) + " features, got " +
                        std::to_string(x.cols()));
    std::vector<int> out;
    out.reserve(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(model.predict_row(x.row(r)));
    return out;
}

std::vector<std::vector<double>> boosted_scores(const TrainedClassifier& model, const Matrix& x, std::size_t rounds) {
    if (model.kind != ModelKind::Boosted) throw DataError("boosted_scores needs a boosted model");
    rounds = std::min(rounds, model.rounds);
    const std::size_t k = model.label_space.size();
    std::vector<std::vector<double>> out(x.rows(), model.base_scores);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t r = 0; r < rounds; ++r)
            for (std::size_t c = 0; c < k; ++c)
                out[i][c] += model.learning_rate * model.trees[r * k + c].leaf_for(x.row(i)).value[0];
    return out;
}

double softmax_log_loss(const std::vector<std::vector<double>>& scores, const TrainedClassifier& model,
                        std::span<const int> y) {
    if (scores.size() != y.size() || y.empty()) throw DataError("softmax_log_loss: size mismatch");
    auto slots = detail::to_slots(y, model.label_space);
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& s = scores[i];
        double hi = *std::max_element(s.begin(), s.end());
        double lse = 0.0;
        for (double v : s) lse += std::exp(v - hi);
        loss += hi + std::log(lse) - s[static_cast<std::size_t>(slots[i])];
    }
    return loss / static_cast<double>(y.size());
}

}  // namespace rcpm
