#include "wb/texture.hpp"

#include <cmath>
#include <cstdlib>

#include "wb/errors.hpp"

namespace wb {

namespace {

constexpr int kLevels = 256;
constexpr size_t kCells = static_cast<size_t>(kLevels) * kLevels;

// Compensated (Kahan) accumulator; keeps 65536-term feature sums honest.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

const std::array<GlcmConfig, 8>& canonical_glcm_configs() {
    static const std::array<GlcmConfig, 8> configs = [] {
        std::array<GlcmConfig, 8> c{};
        int k = 0;
        for (int d : kGlcmDistances) {
            c[k++] = {d, Direction::horizontal};
            c[k++] = {d, Direction::vertical};
        }
        return c;
    }();
    return configs;
}

CooccurrenceMatrix compute_glcm_offset(const ResidualImage& residual, int drow, int dcol) {
    CooccurrenceMatrix m;
    m.config.distance = std::abs(drow) + std::abs(dcol);
    m.config.direction = drow == 0 ? Direction::horizontal : Direction::vertical;
    m.counts.assign(kCells, 0);
    m.normalized.assign(kCells, 0.0);

    const int h = residual.height, w = residual.width;
    const int y0 = std::max(0, -drow), y1 = std::min(h, h - drow);
    const int x0 = std::max(0, -dcol), x1 = std::min(w, w - dcol);
    for (int y = y0; y < y1; ++y) {
        const uint8_t* row = residual.pixels.data() + static_cast<size_t>(y) * w;
        const uint8_t* off = residual.pixels.data() + static_cast<size_t>(y + drow) * w + dcol;
        for (int x = x0; x < x1; ++x) {
            ++m.counts[static_cast<size_t>(row[x]) * kLevels + off[x]];
        }
    }

    m.total = 0;
    for (uint64_t c : m.counts) m.total += c;
    if (m.total > 0) {
        double inv = 1.0 / static_cast<double>(m.total);
        for (size_t i = 0; i < kCells; ++i) m.normalized[i] = static_cast<double>(m.counts[i]) * inv;
    }
    return m;
}

CooccurrenceMatrix compute_glcm(const ResidualImage& residual, GlcmConfig config) {
    if (config.distance <= 0) fail(Errc::invalid_config, "glcm distance must be positive");
    if (config.direction == Direction::horizontal && config.distance >= residual.width)
        fail(Errc::invalid_config, "glcm distance " + std::to_string(config.distance) +
                                       " >= image width " + std::to_string(residual.width));
    if (config.direction == Direction::vertical && config.distance >= residual.height)
        fail(Errc::invalid_config, "glcm distance " + std::to_string(config.distance) +
                                       " >= image height " + std::to_string(residual.height));
    int drow = config.direction == Direction::vertical ? config.distance : 0;
    int dcol = config.direction == Direction::horizontal ? config.distance : 0;
    CooccurrenceMatrix m = compute_glcm_offset(residual, drow, dcol);
    m.config = config;
    return m;
}

double feature_contrast(std::span<const double> n) {
    KahanSum s;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) {
            double d = i - j;
            s.add(n[static_cast<size_t>(i) * kLevels + j] * d * d);
        }
    return s.sum;
}

double feature_homogeneity(std::span<const double> n) {
    KahanSum s;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) {
            double d = i - j;
            s.add(n[static_cast<size_t>(i) * kLevels + j] / (1.0 + d * d));
        }
    return s.sum;
}

double feature_dissimilarity(std::span<const double> n) {
    KahanSum s;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) s.add(n[static_cast<size_t>(i) * kLevels + j] * std::abs(i - j));
    return s.sum;
}

double feature_energy(std::span<const double> n) {
    KahanSum s;
    for (size_t i = 0; i < kCells; ++i) s.add(n[i] * n[i]);
    return std::sqrt(s.sum);
}

FeatureValue feature_correlation(std::span<const double> n) {
    KahanSum mu_i, mu_j;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) {
            double c = n[static_cast<size_t>(i) * kLevels + j];
            mu_i.add(c * i);
            mu_j.add(c * j);
        }
    KahanSum var_i, var_j;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) {
            double c = n[static_cast<size_t>(i) * kLevels + j];
            var_i.add(c * (i - mu_i.sum) * (i - mu_i.sum));
            var_j.add(c * (j - mu_j.sum) * (j - mu_j.sum));
        }
    // σi·σj computed as one sqrt of the exact variance product; keeps the
    // diagonal/anti-diagonal cases at exactly ±1
    double sigma_prod = std::sqrt(std::max(0.0, var_i.sum) * std::max(0.0, var_j.sum));
    if (sigma_prod < 1e-12) return {0.0, true};  // constant marginal carries no correlation
    KahanSum s;
    for (int i = 0; i < kLevels; ++i)
        for (int j = 0; j < kLevels; ++j) {
            double c = n[static_cast<size_t>(i) * kLevels + j];
            s.add(c * (i - mu_i.sum) * (j - mu_j.sum));
        }
    return {s.sum / sigma_prod, false};
}

FeatureValue compute_feature(Metric m, std::span<const double> normalized) {
    switch (m) {
        case Metric::contrast:
            return {feature_contrast(normalized), false};
        case Metric::dissimilarity:
            return {feature_dissimilarity(normalized), false};
        case Metric::energy:
            return {feature_energy(normalized), false};
        case Metric::homogeneity:
            return {feature_homogeneity(normalized), false};
        case Metric::correlation:
            return feature_correlation(normalized);
    }
    fail(Errc::generic, "unreachable metric");
}

const char* metric_tag(Metric m) {
    switch (m) {
        case Metric::contrast:
            return "f_c";
        case Metric::dissimilarity:
            return "f_d";
        case Metric::energy:
            return "f_e";
        case Metric::homogeneity:
            return "f_h";
        case Metric::correlation:
            return "f_rho";
    }
    return "?";
}

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = [] {
        std::array<std::string, kFeatureCount> out;
        int k = 0;
        for (Metric m : kMetrics)
            for (int d : kGlcmDistances)
                for (Direction dir : {Direction::horizontal, Direction::vertical})
                    out[k++] = std::string(metric_tag(m)) + "_d" + std::to_string(d) + "_" + direction_tag(dir);
        return out;
    }();
    return names;
}

int feature_index(Metric m, int distance, Direction direction) {
    int mi = static_cast<int>(m);
    int di = -1;
    for (size_t i = 0; i < kGlcmDistances.size(); ++i)
        if (kGlcmDistances[i] == distance) di = static_cast<int>(i);
    if (di < 0) return -1;
    return mi * 8 + di * 2 + (direction == Direction::horizontal ? 0 : 1);
}

int feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i)
        if (names[i] == name) return i;
    return -1;
}

FeatureVector features_from_residual(const ResidualImage& residual) {
    FeatureVector fv;
    for (const GlcmConfig& cfg : canonical_glcm_configs()) {
        CooccurrenceMatrix glcm = compute_glcm(residual, cfg);
        for (Metric m : kMetrics) {
            FeatureValue v = compute_feature(m, glcm.normalized);
            int idx = feature_index(m, cfg.distance, cfg.direction);
            fv.values[idx] = v.value;
            fv.degenerate[idx] = v.degenerate;
        }
    }
    return fv;
}

FeatureVector extract_features(const Image& patch, const PreprocessConfig& cfg) {
    return features_from_residual(preprocess_patch(patch, cfg));
}

}  // namespace wb
