#include <algorithm>
#include <cmath>
#include <numeric>

#include "rcpm/error.hpp"
#include "rcpm/learners.hpp"
#include "tree_builders.hpp"

namespace rcpm {
namespace detail {
namespace {

// Impurity and gain comparisons treat differences below this as ties.
constexpr double kTieTolerance = 1e-10;

double midpoint(double lo, double hi) {
    double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

bool better(double score, int feature, double threshold, double best_score, int best_feature, double best_threshold,
            bool minimise) {
    if (best_feature < 0) return true;
    double diff = minimise ? best_score - score : score - best_score;
    if (diff > kTieTolerance) return true;
    if (diff < -kTieTolerance) return false;
    if (feature != best_feature) return feature < best_feature;
    return threshold < best_threshold;
}

}  // namespace

std::vector<int> sorted_labels(std::span<const int> y) {
    std::vector<int> labels(y.begin(), y.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

std::vector<int> to_slots(std::span<const int> y, std::span<const int> label_space) {
    std::vector<int> slots;
    slots.reserve(y.size());
    for (int label : y) {
        auto it = std::lower_bound(label_space.begin(), label_space.end(), label);
        slots.push_back(static_cast<int>(it - label_space.begin()));
    }
    return slots;
}

GiniTreeBuilder::GiniTreeBuilder(const Matrix& x, std::span<const int> slots, std::size_t n_classes,
                                 const TreeParams& params, const Deadline& deadline)
    : x_(x), slots_(slots), n_classes_(n_classes), params_(params), deadline_(deadline), rng_(params.seed) {
    feature_order_.resize(x.cols());
    std::iota(feature_order_.begin(), feature_order_.end(), std::size_t{0});
    left_counts_.resize(n_classes);
}

Tree GiniTreeBuilder::build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    tree_ = {};
    grow(0, rows_.size(), 0);
    return std::move(tree_);
}

int GiniTreeBuilder::grow(std::size_t begin, std::size_t end, int depth) {
    deadline_.check();
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    std::vector<double> counts(n_classes_, 0.0);
    for (std::size_t i = begin; i < end; ++i) counts[static_cast<std::size_t>(slots_[rows_[i]])] += 1.0;
    const std::size_t n = end - begin;
    const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;

    Split split;
    bool can_split = !pure && n >= params_.min_samples_split && n >= 2 * params_.min_samples_leaf &&
                     (params_.max_depth < 0 || depth < params_.max_depth);
    if (!can_split || !best_split(begin, end, counts, split)) {
        tree_.nodes[static_cast<std::size_t>(id)].value = std::move(counts);
        return id;
    }

    auto f = static_cast<std::size_t>(split.feature);
    auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                     rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                     [&](std::size_t r) { return x_(r, f) <= split.threshold; });
    auto middle = static_cast<std::size_t>(mid - rows_.begin());
    int left = grow(begin, middle, depth + 1);
    int right = grow(middle, end, depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
}

bool GiniTreeBuilder::best_split(std::size_t begin, std::size_t end, const std::vector<double>& counts, Split& out) {
    const std::size_t n = end - begin;
    const std::size_t n_features = x_.cols();
    std::size_t budget = n_features;
    if (params_.max_features && *params_.max_features < n_features) {
        budget = std::max<std::size_t>(1, *params_.max_features);
        std::shuffle(feature_order_.begin(), feature_order_.end(), rng_);
    }
    double total_sumsq = 0.0;
    for (double c : counts) total_sumsq += c * c;
    const auto min_leaf = static_cast<double>(std::max<std::size_t>(1, params_.min_samples_leaf));

    bool found = false;
    std::size_t evaluated = 0;
    buffer_.resize(n);
    for (std::size_t fi = 0; fi < n_features && evaluated < budget; ++fi) {
        const std::size_t f = budget == n_features ? fi : feature_order_[fi];
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = rows_[begin + i];
            buffer_[i] = {x_(r, f), slots_[r]};
        }
        std::sort(buffer_.begin(), buffer_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (buffer_.front().first == buffer_.back().first) continue;  // constant here
        ++evaluated;

        std::fill(left_counts_.begin(), left_counts_.end(), 0.0);
        double sumsq_left = 0.0;
        double sumsq_right = total_sumsq;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            auto c = static_cast<std::size_t>(buffer_[i].second);
            double lc = left_counts_[c];
            double rc = counts[c] - lc;
            sumsq_left += 2.0 * lc + 1.0;
            sumsq_right -= 2.0 * rc - 1.0;
            left_counts_[c] = lc + 1.0;
            if (buffer_[i].first == buffer_[i + 1].first) continue;
            double nl = static_cast<double>(i + 1);
            double nr = static_cast<double>(n - i - 1);
            if (nl < min_leaf || nr < min_leaf) continue;
            // n * weighted Gini of the two children
            double score = (nl - sumsq_left / nl) + (nr - sumsq_right / nr);
            double threshold = midpoint(buffer_[i].first, buffer_[i + 1].first);
            if (better(score, static_cast<int>(f), threshold, out.score, found ? out.feature : -1, out.threshold,
                       true)) {
                out = {static_cast<int>(f), threshold, score};
                found = true;
            }
        }
    }
    return found;
}

NewtonTreeBuilder::NewtonTreeBuilder(const Matrix& x, std::span<const double> grad, std::span<const double> hess,
                                     std::span<const std::size_t> features, const BoostParams& params)
    : x_(x), grad_(grad), hess_(hess), features_(features), params_(params) {}

Tree NewtonTreeBuilder::build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    tree_ = {};
    grow(0, rows_.size(), 0);
    return std::move(tree_);
}

int NewtonTreeBuilder::grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double g = 0.0;
    double h = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        g += grad_[rows_[i]];
        h += hess_[rows_[i]];
    }
    const std::size_t n = end - begin;
    Split split;
    bool can_split = n >= 2 * std::max<std::size_t>(1, params_.min_samples_leaf) &&
                     (params_.max_depth < 0 || depth < params_.max_depth);
    if (!can_split || !best_split(begin, end, g, h, split)) {
        tree_.nodes[static_cast<std::size_t>(id)].value = {-g / (h + params_.l2_regularization)};
        return id;
    }
    auto f = static_cast<std::size_t>(split.feature);
    auto mid = std::stable_partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                     rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                     [&](std::size_t r) { return x_(r, f) <= split.threshold; });
    auto middle = static_cast<std::size_t>(mid - rows_.begin());
    int left = grow(begin, middle, depth + 1);
    int right = grow(middle, end, depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left;
    node.right = right;
    return id;
}

bool NewtonTreeBuilder::best_split(std::size_t begin, std::size_t end, double g, double h, Split& out) {
    const std::size_t n = end - begin;
    const double lambda = params_.l2_regularization;
    const double parent = g * g / (h + lambda);
    const auto min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    bool found = false;
    buffer_.resize(n);
    for (std::size_t f : features_) {
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = rows_[begin + i];
            buffer_[i] = {x_(r, f), grad_[r], hess_[r]};
        }
        std::sort(buffer_.begin(), buffer_.end(), [](const Item& a, const Item& b) { return a.value < b.value; });
        if (buffer_.front().value == buffer_.back().value) continue;
        double gl = 0.0;
        double hl = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            gl += buffer_[i].grad;
            hl += buffer_[i].hess;
            if (buffer_[i].value == buffer_[i + 1].value) continue;
            if (i + 1 < min_leaf || n - i - 1 < min_leaf) continue;
            double gr = g - gl;
            double hr = h - hl;
            if (hl < params_.min_child_weight || hr < params_.min_child_weight) continue;
            double gain = gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent;
            if (gain <= kTieTolerance) continue;
            double threshold = midpoint(buffer_[i].value, buffer_[i + 1].value);
            if (better(gain, static_cast<int>(f), threshold, out.gain, found ? out.feature : -1, out.threshold,
                       false)) {
                out = {static_cast<int>(f), threshold, gain};
                found = true;
            }
        }
    }
    return found;
}

}  // namespace detail

const TreeNode& Tree::leaf_for(std::span<const double> row) const {
    const TreeNode* node = &nodes.at(0);
    while (!node->is_leaf()) {
        int next = row[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right;
        node = &nodes[static_cast<std::size_t>(next)];
    }
    return *node;
}

std::size_t Tree::depth() const {
    if (nodes.empty()) return 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    std::size_t deepest = 0;
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        const auto& node = nodes[static_cast<std::size_t>(id)];
        if (!node.is_leaf()) {
            stack.emplace_back(node.left, d + 1);
            stack.emplace_back(node.right, d + 1);
        }
    }
    return deepest;
}

TrainedClassifier train_majority(std::span<const int> y, std::span<const std::string> label_names) {
    if (y.empty()) throw DataError("cannot train on an empty target vector");
    TrainedClassifier model;
    model.kind = ModelKind::Majority;
    model.label_space = detail::sorted_labels(y);
    std::vector<std::size_t> counts(model.label_space.size(), 0);
    for (int slot : detail::to_slots(y, model.label_space)) ++counts[static_cast<std::size_t>(slot)];
    auto name_of = [&](int label) -> const std::string& { return label_names[static_cast<std::size_t>(label)]; };
    if (!label_names.empty()) {
        for (int label : model.label_space)
            if (label < 0 || static_cast<std::size_t>(label) >= label_names.size())
                throw DataError("label " + std::to_string(label) + " has no name");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        if (counts[i] > counts[best]) {
            best = i;
        } else if (counts[i] == counts[best] && !label_names.empty() &&
                   name_of(model.label_space[i]) < name_of(model.label_space[best])) {
            best = i;
        }
    }
    model.majority_label = model.label_space[best];
    return model;
}

TrainedClassifier train_tree(const Matrix& x, std::span<const int> y, const TreeParams& params,
                             const Deadline& deadline) {
    if (x.rows() == 0 || y.empty()) throw DataError("cannot train a tree on empty data");
    if (x.rows() != y.size()) throw DataError("feature matrix and targets differ in length");
    TrainedClassifier model;
    model.kind = ModelKind::Tree;
    model.label_space = detail::sorted_labels(y);
    model.seed = params.seed;
    model.n_features = x.cols();
    auto slots = detail::to_slots(y, model.label_space);
    std::vector<std::size_t> rows(x.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    detail::GiniTreeBuilder builder(x, slots, model.label_space.size(), params, deadline);
    model.trees.push_back(builder.build(std::move(rows)));
    return model;
}

}  // namespace rcpm
