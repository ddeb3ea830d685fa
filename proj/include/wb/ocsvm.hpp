#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wb/image.hpp"

namespace wb {

// Per-feature z-scoring, fitted on the training set and stored in the model.
struct Scaler {
    bool enabled = false;
    std::vector<double> mean;
    std::vector<double> stddev;

    void fit(const RowMatrix& X);
    void apply(std::span<double> row) const;
    RowMatrix transform(const RowMatrix& X) const;
};

struct OneClassSvmParams {
    double nu = 0.5;
    double gamma = 0.0;  // 0 ⇒ "scale": 1/(n_features · Var(X))
    bool standardize = true;
    double tol = 1e-4;
    uint64_t max_iter = 20'000'000;
    size_t cache_mb = 256;
};

struct OneClassSvmModel {
    RowMatrix support_vectors;               // rows with nonzero dual coefficient
    std::vector<double> dual_coefficients;   // in [0, 1/(nu·n)], summing to 1
    double rho = 0.0;
    double gamma = 0.0;
    double nu = 0.5;
    Scaler scaler;
    int train_dim = 0;
    double kkt_residual = 0.0;  // final max-violating-pair gap, recomputed exactly
    uint64_t iterations = 0;
};

// Solves the one-class dual (box [0, 1/(nu·n)], simplex equality) by SMO on
// the maximal violating pair, to KKT gap ≤ tol. Throws if the iteration cap
// is hit before convergence.
OneClassSvmModel fit_ocsvm(const RowMatrix& X, const OneClassSvmParams& params = {});

// Σ αᵢ·K(svᵢ, x) − rho; positive inside the learned support region.
double score_ocsvm(const OneClassSvmModel& model, std::span<const double> x);

}  // namespace wb
