#pragma once

#include <span>

namespace wb {

// AUC under the convention that real (inlier) scores are expected higher;
// computed as the Mann-Whitney rank statistic with ties counted 1/2. The
// same number is the synthetic-as-positive AUC on negated scores, which is
// how results tables are read.
double auc(std::span<const double> scores_real, std::span<const double> scores_synth);

// (rate of real scored > threshold + rate of synthetic scored ≤ threshold) / 2.
double balanced_accuracy(std::span<const double> scores_real, std::span<const double> scores_synth,
                         double threshold = 0.0);

}  // namespace wb
