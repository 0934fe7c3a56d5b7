#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rcpm/deadline.hpp"
#include "rcpm/matrix.hpp"

namespace rcpm {

enum class ModelKind { Majority, Tree, Forest, Boosted };

std::string_view to_string(ModelKind kind);
/// Accepts "majority", "tree", "forest", "boosted"; throws ConfigError otherwise.
ModelKind parse_model_kind(std::string_view name);

/// Depth sentinel meaning "grow until pure or out of samples".
inline constexpr int kUnlimitedDepth = -1;

struct TreeParams {
    int max_depth = kUnlimitedDepth;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    /// Features examined per node; unset means all.
    std::optional<std::size_t> max_features;
    std::uint64_t seed = 0;
};

struct ForestParams {
    std::size_t n_estimators = 100;
    int max_depth = kUnlimitedDepth;
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    bool bootstrap = true;
    /// Unset means round(sqrt(#features)).
    std::optional<std::size_t> max_features;
};

struct BoostParams {
    std::size_t n_estimators = 100;
    int max_depth = kUnlimitedDepth;
    double learning_rate = 0.1;
    double subsample = 1.0;
    double colsample = 1.0;
    double l2_regularization = 1.0;
    double min_child_weight = 1e-3;
    std::size_t min_samples_leaf = 1;
};

/// Array-encoded binary tree, root at index 0. Internal nodes send rows with
/// `x[feature] <= threshold` to `left`. Classification leaves hold per-class
/// sample counts (indexed by slot in the model's label space); regression
/// leaves hold a single value.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> value;

    bool is_leaf() const { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct Tree {
    std::vector<TreeNode> nodes;

    const TreeNode& leaf_for(std::span<const double> row) const;
    std::size_t depth() const;
    friend bool operator==(const Tree&, const Tree&) = default;
};

struct TrainedClassifier {
    ModelKind kind = ModelKind::Majority;
    /// Sorted distinct training labels; "slot" below means an index into it.
    std::vector<int> label_space;
    std::uint64_t seed = 0;
    std::size_t n_features = 0;

    int majority_label = 0;   // Majority
    std::vector<Tree> trees;  // Tree/Forest: one per estimator. Boosted: round-major, one per class per round.

    std::vector<double> base_scores;  // Boosted: per-slot initial score (log prior)
    double learning_rate = 0.0;       // Boosted
    std::size_t rounds = 0;           // Boosted

    int predict_row(std::span<const double> row) const;
    friend bool operator==(const TrainedClassifier&, const TrainedClassifier&) = default;
};

/// Most frequent label; ties go to the label whose name in `label_names`
/// (indexed by label id) sorts first, or to the smallest id when no names are given.
TrainedClassifier train_majority(std::span<const int> y, std::span<const std::string> label_names = {});

/// Greedy CART with Gini impurity. Thresholds are midpoints between
/// consecutive distinct values; ties on impurity go to the lowest feature
/// index, then the lowest threshold.
TrainedClassifier train_tree(const Matrix& x, std::span<const int> y, const TreeParams& params = {},
                             const Deadline& deadline = Deadline::none());

TrainedClassifier train_random_forest(const Matrix& x, std::span<const int> y, const ForestParams& params,
                                      std::uint64_t seed, const Deadline& deadline = Deadline::none());

/// Multiclass softmax boosting with second-order leaf values.
TrainedClassifier train_gradient_boosted(const Matrix& x, std::span<const int> y, const BoostParams& params,
                                         std::uint64_t seed, const Deadline& deadline = Deadline::none());

std::vector<int> predict(const TrainedClassifier& model, const Matrix& x);

/// Raw per-slot scores of a boosted model after its first `rounds` rounds.
std::vector<std::vector<double>> boosted_scores(const TrainedClassifier& model, const Matrix& x, std::size_t rounds);

/// Mean negative log-likelihood of `y` under the softmax of `scores`.
double softmax_log_loss(const std::vector<std::vector<double>>& scores, const TrainedClassifier& model,
                        std::span<const int> y);

// ---------------------------------------------------------------- grid search

using ParamValue = std::variant<std::int64_t, double, bool>;
using ParamAssignment = std::vector<std::pair<std::string, ParamValue>>;

std::string to_string(const ParamValue& v);
std::string to_string(const ParamAssignment& a);

/// Ordered axes; the Cartesian product enumerates with the last axis varying fastest.
struct HyperGrid {
    std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;

    std::vector<ParamAssignment> points() const;

    static HyperGrid random_forest_default();
    static HyperGrid boosted_default();
    static HyperGrid for_model(ModelKind kind);
};

/// Throws ConfigError on unknown keys or mistyped values.
ForestParams forest_params(const ParamAssignment& a);
BoostParams boost_params(const ParamAssignment& a);
TreeParams tree_params(const ParamAssignment& a);

TrainedClassifier train_model(ModelKind kind, const Matrix& x, std::span<const int> y, const ParamAssignment& params,
                              std::uint64_t seed, std::span<const std::string> label_names = {},
                              const Deadline& deadline = Deadline::none());

/// Per class (ascending label), shuffles its indices and deals them round-robin
/// over the folds, continuing the dealer position across classes. Every class
/// with at least two members then has a member in every training complement.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed);

struct CVOutcome {
    ParamAssignment best_params;
    double mean_fold_accuracy = 0.0;
    std::vector<double> per_fold;
    TrainedClassifier model;  // refit on all rows with best_params
};

struct GridSearchOptions {
    std::size_t folds = 3;
    std::size_t workers = 1;
    std::vector<std::string> label_names;
    Deadline deadline;
};

/// Exhaustive stratified k-fold search maximising mean fold accuracy; ties
/// keep the earliest grid point.
CVOutcome grid_search_cv(ModelKind kind, const Matrix& x, std::span<const int> y, const HyperGrid& grid,
                         std::uint64_t seed, const GridSearchOptions& options = {});

}  // namespace rcpm
