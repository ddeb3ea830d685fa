#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wb/preprocess.hpp"

namespace wb {

enum class Direction : uint8_t { horizontal, vertical };

inline const char* direction_tag(Direction d) { return d == Direction::horizontal ? "H" : "V"; }

struct GlcmConfig {
    int distance = 4;
    Direction direction = Direction::horizontal;
};

inline constexpr std::array<int, 4> kGlcmDistances = {4, 8, 16, 32};

// The eight (distance, direction) pairs the descriptor is built from,
// ordered distance-major: d4 H, d4 V, d8 H, ..., d32 V.
const std::array<GlcmConfig, 8>& canonical_glcm_configs();

// 256×256 co-occurrence matrix for one directed offset. `counts[i*256+j]`
// is the number of positions whose gray level is i with gray level j at the
// offset; `normalized` is counts divided by their sum.
struct CooccurrenceMatrix {
    GlcmConfig config;
    std::vector<uint64_t> counts;
    std::vector<double> normalized;
    uint64_t total = 0;
};

CooccurrenceMatrix compute_glcm(const ResidualImage& residual, GlcmConfig config);

// Generalized (drow, dcol) offset; horizontal is (0, d), vertical is (d, 0).
CooccurrenceMatrix compute_glcm_offset(const ResidualImage& residual, int drow, int dcol);

enum class Metric : uint8_t { contrast, dissimilarity, energy, homogeneity, correlation };

inline constexpr std::array<Metric, 5> kMetrics = {Metric::contrast, Metric::dissimilarity, Metric::energy,
                                                   Metric::homogeneity, Metric::correlation};

const char* metric_tag(Metric m);  // "f_c", "f_d", "f_e", "f_h", "f_rho"

struct FeatureValue {
    double value = 0.0;
    bool degenerate = false;
};

// Scalar features over a normalized 256×256 matrix (row-major span of 65536).
double feature_contrast(std::span<const double> normalized);       // Σ C̄ij (i−j)²
double feature_homogeneity(std::span<const double> normalized);    // Σ C̄ij / (1+(i−j)²)
double feature_dissimilarity(std::span<const double> normalized);  // Σ C̄ij |i−j|
double feature_energy(std::span<const double> normalized);         // sqrt(Σ C̄ij²)
// Σ C̄ij (i−μi)(j−μj)/(σi σj); degenerate (value 0, flag set) when σi·σj < 1e-12.
FeatureValue feature_correlation(std::span<const double> normalized);

FeatureValue compute_feature(Metric m, std::span<const double> normalized);

inline constexpr int kFeatureCount = 40;

// 40-entry descriptor in the frozen canonical order: metric name ascending
// (f_c, f_d, f_e, f_h, f_rho), then distance ascending, then H before V.
struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::array<bool, kFeatureCount> degenerate{};
};

const std::array<std::string, kFeatureCount>& feature_names();
int feature_index(Metric m, int distance, Direction direction);
int feature_index(const std::string& name);  // −1 if unknown

FeatureVector extract_features(const Image& patch, const PreprocessConfig& cfg = {});
FeatureVector features_from_residual(const ResidualImage& residual);

}  // namespace wb
