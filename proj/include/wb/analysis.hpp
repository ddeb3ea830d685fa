#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wb/runner.hpp"
#include "wb/texture.hpp"

namespace wb {

// Pixel-wise arithmetic mean of the eight canonical normalized GLCMs of one
// image; a 256×256 matrix whose entries sum to 1.
struct AveragedCooccurrence {
    std::vector<double> matrix;  // 65536, row-major
};

AveragedCooccurrence average_cooccurrence(const Image& patch, const PreprocessConfig& cfg = {});

struct PcaProjection {
    RowMatrix components;        // k×dim, orthonormal rows
    std::vector<double> mean;    // dim
    RowMatrix projections;       // n×k, training rows
    std::vector<double> singular_values;
};

// Top-k principal directions of the mean-centered rows, computed through the
// n×n Gram matrix (n ≪ dim). Rows beyond the data rank are completed with an
// orthonormal basis so k may go up to n.
PcaProjection fit_pca(const RowMatrix& rows, int k);

std::vector<double> pca_project(const PcaProjection& pca, std::span<const double> row);

// Per-feature detector quality for one generator.
struct FeatureRanking {
    std::array<double, kFeatureCount> auc{};
    std::vector<std::string> best8;                 // top 8 by AUC, ties broken by name
    std::map<std::string, double> best_per_metric;  // "f_c" → best AUC among its 8 variants
};

struct FeatureScoreTable {
    std::array<std::vector<double>, kFeatureCount> real_scores;
    std::array<std::vector<double>, kFeatureCount> synth_scores;
};

FeatureRanking rank_features(const FeatureScoreTable& table);

struct CombinationResult {
    int size = 0;
    int n_evaluated = 0;  // C(8, size)
    std::vector<std::string> best_auc_subset;
    double best_auc = 0.0;
    std::vector<std::string> best_accuracy_subset;
    double best_accuracy = 0.0;
};

// Exhaustive retraining over every subset of the best-8 features at each
// requested size (2→28, 3→56, 4→70 subsets). Each subset gets its own seed
// derived from the master seed and the subset id.
std::vector<CombinationResult> combination_search(const DatasetManifest& manifest, const FoldAssignment& folds,
                                                  const std::vector<std::string>& best8,
                                                  const DetectorConfig& detector, const std::string& generator,
                                                  const PostProcessSpec& train_post,
                                                  const PostProcessSpec& test_post, const CrossvalOptions& opts,
                                                  const std::vector<int>& sizes, FeatureCache* cache = nullptr);

// All size-k index subsets of {0..n−1}, lexicographic.
std::vector<std::vector<int>> enumerate_subsets(int n, int k);

}  // namespace wb
