#pragma once

#include <string>
#include <vector>

#include "wb/dataset.hpp"
#include "wb/image.hpp"

namespace wb {

enum class PostProcessKind : uint8_t { none, upscale, down_upscale, jpeg };

// One post-processing condition. Factors and qualities are restricted to
// the canonical grid (upscale 1.25/1.5, down-upscale 0.5/0.75/0.9, JPEG
// 80/90/100) unless allow_off_grid is passed at parse time.
struct PostProcessSpec {
    PostProcessKind kind = PostProcessKind::none;
    double factor = 1.0;
    int quality = 100;
    uint64_t rng_seed = 0;  // master seed for the random crop

    std::string to_string() const;  // "none", "upscale_1.25", "down_upscale_0.9", "jpeg_80"
    static PostProcessSpec parse(const std::string& text, bool allow_off_grid = false);
};

// The eight canonical conditions, in table order.
const std::vector<std::string>& post_process_grid();

// Bilinear resize to round(side·factor) then a uniformly random crop back
// to the input size, deterministic per seed.
Image apply_upscale(const Image& patch, double factor, uint64_t seed);

// Bilinear down to round(side·factor), then bilinear back up.
Image apply_down_upscale(const Image& patch, double factor);

// Baseline JPEG encode/decode roundtrip at the given quality.
Image apply_jpeg(const Image& patch, int quality);

Image apply_post_process(const Image& patch, const PostProcessSpec& spec);

// Writes post-processed copies of every record (PNG for resizes, JPG for
// compression) plus a derived manifest carrying provenance fields.
DatasetManifest materialize_augmented(const DatasetManifest& manifest, const PostProcessSpec& spec,
                                      const std::string& out_dir);

}  // namespace wb
