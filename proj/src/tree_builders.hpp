#pragma once

// Internal CART growers shared by the single tree, the forest and the booster.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rcpm/deadline.hpp"
#include "rcpm/learners.hpp"
#include "rcpm/matrix.hpp"

namespace rcpm::detail {

/// Classification tree on Gini impurity. `slots[r]` is the class slot of row r.
class GiniTreeBuilder {
public:
    GiniTreeBuilder(const Matrix& x, std::span<const int> slots, std::size_t n_classes, const TreeParams& params,
                    const Deadline& deadline);

    /// `rows` may repeat indices (bootstrap samples).
    Tree build(std::vector<std::size_t> rows);

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double score = 0.0;
    };

    int grow(std::size_t begin, std::size_t end, int depth);
    bool best_split(std::size_t begin, std::size_t end, const std::vector<double>& counts, Split& out);

    const Matrix& x_;
    std::span<const int> slots_;
    std::size_t n_classes_;
    TreeParams params_;
    const Deadline& deadline_;
    std::mt19937_64 rng_;
    std::vector<std::size_t> rows_;
    std::vector<std::size_t> feature_order_;
    std::vector<std::pair<double, int>> buffer_;
    std::vector<double> left_counts_;
    Tree tree_;
};

/// Regression tree on gradient/hessian statistics with L2-regularised leaf values -G/(H+lambda).
class NewtonTreeBuilder {
public:
    NewtonTreeBuilder(const Matrix& x, std::span<const double> grad, std::span<const double> hess,
                      std::span<const std::size_t> features, const BoostParams& params);

    Tree build(std::vector<std::size_t> rows);

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };
    struct Item {
        double value;
        double grad;
        double hess;
    };

    int grow(std::size_t begin, std::size_t end, int depth);
    bool best_split(std::size_t begin, std::size_t end, double g, double h, Split& out);

    const Matrix& x_;
    std::span<const double> grad_;
    std::span<const double> hess_;
    std::span<const std::size_t> features_;
    BoostParams params_;
    std::vector<std::size_t> rows_;
    std::vector<Item> buffer_;
    Tree tree_;
};

/// Index of the largest value; ties keep the first.
inline std::size_t argmax(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

/// Slot of every label in the sorted `label_space`.
std::vector<int> to_slots(std::span<const int> y, std::span<const int> label_space);
std::vector<int> sorted_labels(std::span<const int> y);

}  // namespace rcpm::detail
