#include "wb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "wb/errors.hpp"
#include "wb/metrics.hpp"
#include "wb/rng.hpp"

namespace wb {

AveragedCooccurrence average_cooccurrence(const Image& patch, const PreprocessConfig& cfg) {
    ResidualImage residual = preprocess_patch(patch, cfg);
    AveragedCooccurrence avg;
    avg.matrix.assign(256 * 256, 0.0);
    const auto& configs = canonical_glcm_configs();
    for (const GlcmConfig& c : configs) {
        CooccurrenceMatrix glcm = compute_glcm(residual, c);
        for (size_t i = 0; i < avg.matrix.size(); ++i) avg.matrix[i] += glcm.normalized[i];
    }
    for (double& v : avg.matrix) v /= static_cast<double>(configs.size());
    return avg;
}

PcaProjection fit_pca(const RowMatrix& rows, int k) {
    const int n = rows.rows, dim = rows.cols;
    if (k < 1) fail(Errc::invalid_config, "pca needs k >= 1");
    if (k > n) fail(Errc::invalid_config, "pca k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));

    PcaProjection pca;
    pca.mean.assign(dim, 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < dim; ++c) pca.mean[c] += rows.at(r, c);
    for (double& v : pca.mean) v /= n;

    Eigen::MatrixXd centered(n, dim);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < dim; ++c) centered(r, c) = rows.at(r, c) - pca.mean[c];

    // Gram route: eigenvectors v of X Xᵀ give right singular vectors Xᵀv/σ
    Eigen::MatrixXd gram = centered * centered.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) fail(Errc::numeric, "pca eigendecomposition failed");

    // eigenvalues ascending; walk from the top
    const auto& evals = solver.eigenvalues();
    const auto& evecs = solver.eigenvectors();
    double max_eval = std::max(evals(n - 1), 0.0);
    double rank_tol = std::max(1e-12, max_eval * 1e-12);

    pca.components = make_matrix(k, dim);
    pca.singular_values.assign(k, 0.0);
    Eigen::MatrixXd comp(k, dim);
    int filled = 0;
    for (int i = n - 1; i >= 0 && filled < k; --i) {
        double lambda = evals(i);
        if (lambda <= rank_tol) break;  // past the data rank
        double sigma = std::sqrt(lambda);
        Eigen::VectorXd u = (centered.transpose() * evecs.col(i)) / sigma;
        u.normalize();
        comp.row(filled) = u.transpose();
        pca.singular_values[filled] = sigma;
        ++filled;
    }
    // complete with an orthonormal basis when k exceeds the rank; training
    // rows project to zero on the completed directions
    Rng rng(0x9c0ffee);
    int guard = 0;
    while (filled < k) {
        Eigen::VectorXd cand(dim);
        for (int c = 0; c < dim; ++c) cand(c) = rng.next_gaussian();
        for (int r = 0; r < filled; ++r) cand -= comp.row(r).dot(cand) * comp.row(r).transpose();
        double norm = cand.norm();
        if (norm > 1e-8) {
            comp.row(filled) = (cand / norm).transpose();
            ++filled;
        }
        if (++guard > 100 * k) fail(Errc::numeric, "pca basis completion failed");
    }
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < dim; ++c) pca.components.at(r, c) = comp(r, c);

    Eigen::MatrixXd proj = centered * comp.transpose();
    pca.projections = make_matrix(n, k);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < k; ++c) pca.projections.at(r, c) = proj(r, c);
    return pca;
}

std::vector<double> pca_project(const PcaProjection& pca, std::span<const double> row) {
    if (static_cast<int>(row.size()) != pca.components.cols)
        fail(Errc::invalid_config, "pca_project: dimension mismatch");
    std::vector<double> out(pca.components.rows, 0.0);
    for (int r = 0; r < pca.components.rows; ++r) {
        double dot = 0.0;
        for (int c = 0; c < pca.components.cols; ++c) dot += (row[c] - pca.mean[c]) * pca.components.at(r, c);
        out[r] = dot;
    }
    return out;
}

FeatureRanking rank_features(const FeatureScoreTable& table) {
    FeatureRanking ranking;
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i) {
        ranking.auc[i] = auc(table.real_scores[i], table.synth_scores[i]);
        Metric metric = static_cast<Metric>(i / 8);
        auto [it, inserted] = ranking.best_per_metric.try_emplace(metric_tag(metric), ranking.auc[i]);
        if (!inserted) it->second = std::max(it->second, ranking.auc[i]);
    }
    std::vector<int> order(kFeatureCount);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (ranking.auc[a] != ranking.auc[b]) return ranking.auc[a] > ranking.auc[b];
        return names[a] < names[b];
    });
    for (int i = 0; i < 8; ++i) ranking.best8.push_back(names[order[i]]);
    return ranking;
}

std::vector<std::vector<int>> enumerate_subsets(int n, int k) {
    std::vector<std::vector<int>> subsets;
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        subsets.push_back(pick);
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return subsets;
}

std::vector<CombinationResult> combination_search(const DatasetManifest& manifest, const FoldAssignment& folds,
                                                  const std::vector<std::string>& best8,
                                                  const DetectorConfig& detector, const std::string& generator,
                                                  const PostProcessSpec& train_post,
                                                  const PostProcessSpec& test_post, const CrossvalOptions& opts,
                                                  const std::vector<int>& sizes, FeatureCache* cache) {
    if (best8.size() != 8) fail(Errc::invalid_config, "combination_search expects exactly 8 candidate features");
    std::vector<CombinationResult> results;
    for (int size : sizes) {
        if (size < 2 || size > 4) fail(Errc::invalid_config, "combination sizes must be in {2,3,4}");
        CombinationResult result;
        result.size = size;
        auto subsets = enumerate_subsets(8, size);
        result.n_evaluated = static_cast<int>(subsets.size());
        for (size_t s = 0; s < subsets.size(); ++s) {
            std::vector<std::string> feats;
            for (int idx : subsets[s]) feats.push_back(best8[idx]);
            CrossvalOptions sub_opts = opts;
            sub_opts.seed = derive_seed(opts.seed, "combo-" + std::to_string(size) + "-" + std::to_string(s));
            EvalReport rep =
                run_crossval(manifest, folds, feats, detector, generator, train_post, test_post, sub_opts, cache);
            if (result.best_auc_subset.empty() || rep.auc > result.best_auc) {
                result.best_auc = rep.auc;
                result.best_auc_subset = feats;
            }
            if (result.best_accuracy_subset.empty() || rep.balanced_accuracy > result.best_accuracy) {
                result.best_accuracy = rep.balanced_accuracy;
                result.best_accuracy_subset = feats;
            }
        }
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace wb
