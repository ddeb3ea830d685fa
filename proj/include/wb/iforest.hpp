#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wb/image.hpp"

namespace wb {

struct IsolationTreeNode {
    int feature = -1;  // −1 ⇒ leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int size = 0;  // training rows that reached this node
};

struct IsolationTree {
    std::vector<IsolationTreeNode> nodes;  // node 0 is the root
};

struct IsolationForestModel {
    std::vector<IsolationTree> trees;
    int n_trees = 100;
    int max_samples = 0;
    int train_dim = 0;
    uint64_t rng_seed = 0;
    int height_limit = 0;
};

struct IsolationForestParams {
    int n_trees = 100;
    int max_samples = 0;  // 0 ⇒ the full training set
    uint64_t seed = 0;
};

// Expected path length of an unsuccessful BST search over m points; the
// standard normalizer c(m) = 2·H(m−1) − 2(m−1)/m with H(i) ≈ ln(i) + γ.
double average_path_length(int m);

// Each tree grows on a subsample drawn without replacement (the whole set
// when max_samples covers it), splitting on a uniform random feature at a
// uniform random threshold strictly inside the routed value range, down to
// single rows or the height limit ceil(log2(max_samples)).
IsolationForestModel fit_isolation_forest(const RowMatrix& X, const IsolationForestParams& params = {});

// 0.5 − 2^(−E[h(x)]/c(max_samples)): positive for inliers, negative for anomalies.
double score_isolation_forest(const IsolationForestModel& model, std::span<const double> x);

// E[h(x)] over the trees; exposed for the traversal oracle tests.
double forest_mean_path_length(const IsolationForestModel& model, std::span<const double> x);

}  // namespace wb
