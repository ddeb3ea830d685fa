#pragma once

// Shared test fixtures: synthetic image generators and a temp-dir helper.

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wb/dataset.hpp"
#include "wb/image.hpp"
#include "wb/image_io.hpp"
#include "wb/preprocess.hpp"
#include "wb/rng.hpp"

namespace fixtures {

class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate.string();
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

// Fully random 8-bit image.
inline wb::Image random_image(int width, int height, int channels, uint64_t seed) {
    wb::Image img = wb::make_image(width, height, channels);
    wb::Rng rng(seed);
    for (auto& px : img.data) px = static_cast<uint8_t>(rng.next_below(256));
    return img;
}

inline wb::ResidualImage random_residual(int width, int height, uint64_t seed) {
    wb::ResidualImage res;
    res.width = width;
    res.height = height;
    res.pixels.resize(static_cast<size_t>(width) * height);
    wb::Rng rng(seed);
    for (auto& px : res.pixels) px = static_cast<uint8_t>(rng.next_below(256));
    return res;
}

// Random normalized 256×256 matrix (entries sum to 1).
inline std::vector<double> random_normalized_matrix(uint64_t seed, double sparsity = 0.0) {
    std::vector<double> m(256 * 256, 0.0);
    wb::Rng rng(seed);
    double total = 0.0;
    for (auto& v : m) {
        if (sparsity > 0.0 && rng.next_double() < sparsity) continue;
        v = rng.next_double();
        total += v;
    }
    for (auto& v : m) v /= total;
    return m;
}

// Smooth gray texture: seeded coarse noise grid, bilinearly interpolated,
// plus a mild per-pixel noise floor. Residuals are small and spatially
// correlated, like a photographic surface. Varying `grid` and `noise`
// across images spreads the texture statistics the way a real corpus does.
inline wb::Image smooth_texture(int size, uint64_t seed, int grid = 9, double noise = 2.0) {
    wb::Rng rng(seed);
    std::vector<double> coarse(static_cast<size_t>(grid) * grid);
    for (auto& v : coarse) v = 40.0 + 175.0 * rng.next_double();
    wb::Image img = wb::make_image(size, size, 1);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double gy = static_cast<double>(y) / (size - 1) * (grid - 1);
            double gx = static_cast<double>(x) / (size - 1) * (grid - 1);
            int y0 = static_cast<int>(gy), x0 = static_cast<int>(gx);
            int y1 = std::min(y0 + 1, grid - 1), x1 = std::min(x0 + 1, grid - 1);
            double fy = gy - y0, fx = gx - x0;
            double v = (1 - fy) * ((1 - fx) * coarse[y0 * grid + x0] + fx * coarse[y0 * grid + x1]) +
                       fy * ((1 - fx) * coarse[y1 * grid + x0] + fx * coarse[y1 * grid + x1]);
            v += noise * (2.0 * rng.next_double() - 1.0);
            img.at(y, x) = static_cast<uint8_t>(std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

// Destroys all spatial structure while keeping the histogram.
inline wb::Image shuffle_pixels(const wb::Image& src, uint64_t seed) {
    wb::Image img = src;
    wb::Rng rng(seed);
    for (size_t i = img.data.size(); i > 1; --i) {
        size_t j = rng.next_below(i);
        std::swap(img.data[i - 1], img.data[j]);
    }
    return img;
}

// Separable two-class fixture on disk: smooth "real" patches (one source
// image each) and pixel-shuffled "synthetic" patches per generator tag.
inline wb::DatasetManifest smoke_dataset(const std::string& dir, int n_real,
                                         const std::vector<std::string>& generators, int n_per_generator,
                                         int size = 256, uint64_t seed = 20'22) {
    std::vector<wb::SampleRecord> records;
    for (int i = 0; i < n_real; ++i) {
        // one coherent "population" of textures: continuous mild spread in
        // the noise floor, so detectors see a bulk rather than point masses
        wb::Rng jitter(wb::derive_seed(seed, "jitter-" + std::to_string(i)));
        double noise = 2.6 + 1.2 * jitter.next_double();
        wb::Image img = smooth_texture(size, wb::derive_seed(seed, "real-" + std::to_string(i)),
                                       8 + (i % 5), noise);
        std::string name = "real_" + std::to_string(i) + ".png";
        wb::write_png(img, dir + "/" + name);
        wb::SampleRecord rec;
        rec.id = "real_" + std::to_string(i);
        rec.path = name;
        rec.label = wb::Label::real;
        rec.generator = "none";
        rec.source_image_id = "src_" + std::to_string(i);
        records.push_back(rec);
    }
    int k = 0;
    for (const auto& gen : generators) {
        for (int i = 0; i < n_per_generator; ++i, ++k) {
            wb::Image base = smooth_texture(size, wb::derive_seed(seed, "fake-base-" + std::to_string(k)));
            wb::Image img = shuffle_pixels(base, wb::derive_seed(seed, "fake-shuffle-" + std::to_string(k)));
            std::string name = gen + "_" + std::to_string(i) + ".png";
            wb::write_png(img, dir + "/" + name);
            wb::SampleRecord rec;
            rec.id = gen + "_" + std::to_string(i);
            rec.path = name;
            rec.label = wb::Label::synthetic;
            rec.generator = gen;
            rec.source_image_id = "";
            records.push_back(rec);
        }
    }
    wb::DatasetManifest manifest = wb::manifest_from_records(std::move(records), dir);
    wb::save_manifest(manifest, dir + "/manifest.jsonl");
    return manifest;
}

}  // namespace fixtures
