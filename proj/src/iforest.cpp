#include "wb/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wb/errors.hpp"
#include "wb/rng.hpp"

namespace wb {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

struct TreeBuilder {
    const RowMatrix& X;
    int height_limit;
    Rng rng;
    IsolationTree tree;

    // grows the subtree over rows[begin, end) and returns its node index
    int grow(std::vector<int>& idx, int begin, int end, int depth) {
        int node_id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[node_id].size = end - begin;

        if (end - begin <= 1 || depth >= height_limit) return node_id;

        // candidate split: uniform feature, uniform threshold inside the routed range
        int feature = static_cast<int>(rng.next_below(static_cast<uint64_t>(X.cols)));
        double lo = X.at(idx[begin], feature), hi = lo;
        for (int i = begin + 1; i < end; ++i) {
            double v = X.at(idx[i], feature);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(lo < hi)) return node_id;  // constant column on this subsample
        double threshold = lo + rng.next_double() * (hi - lo);
        if (!(threshold > lo)) threshold = std::nextafter(lo, hi);
        if (!(threshold < hi)) threshold = std::nextafter(hi, lo);
        if (!(threshold > lo && threshold < hi)) return node_id;  // no representable strict split

        auto mid_it = std::partition(idx.begin() + begin, idx.begin() + end,
                                     [&](int r) { return X.at(r, feature) < threshold; });
        int mid = static_cast<int>(mid_it - idx.begin());

        tree.nodes[node_id].feature = feature;
        tree.nodes[node_id].threshold = threshold;
        int left = grow(idx, begin, mid, depth + 1);
        int right = grow(idx, mid, end, depth + 1);
        tree.nodes[node_id].left = left;
        tree.nodes[node_id].right = right;
        return node_id;
    }
};

double tree_path_length(const IsolationTree& tree, std::span<const double> x) {
    int node = 0;
    int depth = 0;
    while (tree.nodes[node].feature >= 0) {
        const auto& n = tree.nodes[node];
        node = x[n.feature] < n.threshold ? n.left : n.right;
        ++depth;
    }
    return depth + average_path_length(tree.nodes[node].size);
}

}  // namespace

double average_path_length(int m) {
    if (m <= 1) return 0.0;
    if (m == 2) return 1.0;
    double n = static_cast<double>(m);
    return 2.0 * (std::log(n - 1.0) + kEulerGamma) - 2.0 * (n - 1.0) / n;
}

IsolationForestModel fit_isolation_forest(const RowMatrix& X, const IsolationForestParams& params) {
    if (X.rows < 2) fail(Errc::invalid_config, "isolation forest needs at least 2 rows");
    if (X.cols < 1) fail(Errc::invalid_config, "isolation forest needs at least 1 feature");
    for (double v : X.data)
        if (!std::isfinite(v)) fail(Errc::numeric, "isolation forest: non-finite training value");

    IsolationForestModel model;
    model.n_trees = params.n_trees;
    model.max_samples = params.max_samples > 0 ? std::min(params.max_samples, X.rows) : X.rows;
    model.train_dim = X.cols;
    model.rng_seed = params.seed;
    model.height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(model.max_samples))));

    Rng master(params.seed);
    std::vector<int> all_rows(X.rows);
    std::iota(all_rows.begin(), all_rows.end(), 0);

    model.trees.reserve(params.n_trees);
    for (int t = 0; t < params.n_trees; ++t) {
        Rng tree_rng = master.fork(static_cast<uint64_t>(t));
        std::vector<int> sample = all_rows;
        if (model.max_samples < X.rows) {
            // partial Fisher-Yates: first max_samples entries form the subsample
            for (int i = 0; i < model.max_samples; ++i) {
                size_t j = i + static_cast<size_t>(tree_rng.next_below(static_cast<uint64_t>(X.rows - i)));
                std::swap(sample[i], sample[j]);
            }
            sample.resize(model.max_samples);
        }
        TreeBuilder builder{X, model.height_limit, tree_rng.fork(0x7eee), {}};
        builder.grow(sample, 0, static_cast<int>(sample.size()), 0);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

double forest_mean_path_length(const IsolationForestModel& model, std::span<const double> x) {
    if (static_cast<int>(x.size()) != model.train_dim)
        fail(Errc::invalid_config, "score dimension mismatch: got " + std::to_string(x.size()) + ", model has " +
                                       std::to_string(model.train_dim));
    double sum = 0.0;
    for (const auto& tree : model.trees) sum += tree_path_length(tree, x);
    return sum / static_cast<double>(model.trees.size());
}

double score_isolation_forest(const IsolationForestModel& model, std::span<const double> x) {
    double mean_path = forest_mean_path_length(model, x);
    double anomaly = std::pow(2.0, -mean_path / average_path_length(model.max_samples));
    return 0.5 - anomaly;
}

}  // namespace wb
