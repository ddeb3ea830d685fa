#include "wb/augment.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "wb/errors.hpp"
#include "wb/image_io.hpp"
#include "wb/rng.hpp"

namespace fs = std::filesystem;

namespace wb {

namespace {

const std::vector<double> kUpscaleFactors = {1.25, 1.5};
const std::vector<double> kDownUpscaleFactors = {0.5, 0.75, 0.9};
const std::vector<int> kJpegQualities = {80, 90, 100};

std::string trim_factor(double f) {
    std::ostringstream ss;
    ss << f;
    return ss.str();
}

bool on_grid(double v, const std::vector<double>& grid) {
    for (double g : grid)
        if (std::abs(v - g) < 1e-9) return true;
    return false;
}

}  // namespace

std::string PostProcessSpec::to_string() const {
    switch (kind) {
        case PostProcessKind::none:
            return "none";
        case PostProcessKind::upscale:
            return "upscale_" + trim_factor(factor);
        case PostProcessKind::down_upscale:
            return "down_upscale_" + trim_factor(factor);
        case PostProcessKind::jpeg:
            return "jpeg_" + std::to_string(quality);
    }
    return "none";
}

PostProcessSpec PostProcessSpec::parse(const std::string& text, bool allow_off_grid) {
    PostProcessSpec spec;
    if (text == "none" || text.empty()) return spec;
    auto parse_value = [&](const std::string& prefix) -> std::string {
        return text.substr(prefix.size());
    };
    if (text.rfind("upscale_", 0) == 0) {
        spec.kind = PostProcessKind::upscale;
        spec.factor = std::stod(parse_value("upscale_"));
        if (!(spec.factor > 1.0)) fail(Errc::invalid_config, "upscale factor must be > 1: " + text);
        if (!allow_off_grid && !on_grid(spec.factor, kUpscaleFactors))
            fail(Errc::invalid_config, "upscale factor off the canonical grid {1.25, 1.5}: " + text);
        return spec;
    }
    if (text.rfind("down_upscale_", 0) == 0) {
        spec.kind = PostProcessKind::down_upscale;
        spec.factor = std::stod(parse_value("down_upscale_"));
        if (!(spec.factor > 0.0 && spec.factor < 1.0))
            fail(Errc::invalid_config, "down-upscale factor must be in (0,1): " + text);
        if (!allow_off_grid && !on_grid(spec.factor, kDownUpscaleFactors))
            fail(Errc::invalid_config, "down-upscale factor off the canonical grid {0.5, 0.75, 0.9}: " + text);
        return spec;
    }
    if (text.rfind("jpeg_", 0) == 0) {
        spec.kind = PostProcessKind::jpeg;
        spec.quality = std::stoi(parse_value("jpeg_"));
        if (spec.quality < 1 || spec.quality > 100)
            fail(Errc::invalid_config, "jpeg quality out of range: " + text);
        if (!allow_off_grid &&
            std::find(kJpegQualities.begin(), kJpegQualities.end(), spec.quality) == kJpegQualities.end())
            fail(Errc::invalid_config, "jpeg quality off the canonical grid {80, 90, 100}: " + text);
        return spec;
    }
    fail(Errc::invalid_config, "unknown post-process spec '" + text + "'");
}

const std::vector<std::string>& post_process_grid() {
    static const std::vector<std::string> grid = {
        "upscale_1.25", "upscale_1.5",  "down_upscale_0.5", "down_upscale_0.75",
        "down_upscale_0.9", "jpeg_80", "jpeg_90", "jpeg_100",
    };
    return grid;
}

Image apply_upscale(const Image& patch, double factor, uint64_t seed) {
    if (!(factor > 1.0)) fail(Errc::invalid_config, "upscale factor must be > 1");
    int new_w = static_cast<int>(std::lround(patch.width * factor));
    int new_h = static_cast<int>(std::lround(patch.height * factor));
    Image big = resize_bilinear(patch, new_w, new_h);
    Rng rng(seed);
    int y = static_cast<int>(rng.next_below(static_cast<uint64_t>(new_h - patch.height) + 1));
    int x = static_cast<int>(rng.next_below(static_cast<uint64_t>(new_w - patch.width) + 1));
    Image out = make_image(patch.width, patch.height, big.channels);
    for (int row = 0; row < patch.height; ++row) {
        const uint8_t* src = big.data.data() + (static_cast<size_t>(y + row) * big.width + x) * big.channels;
        std::copy(src, src + static_cast<size_t>(patch.width) * big.channels,
                  out.data.begin() + static_cast<size_t>(row) * patch.width * big.channels);
    }
    return out;
}

Image apply_down_upscale(const Image& patch, double factor) {
    if (!(factor > 0.0 && factor < 1.0)) fail(Errc::invalid_config, "down-upscale factor must be in (0,1)");
    int small_w = std::max(1, static_cast<int>(std::lround(patch.width * factor)));
    int small_h = std::max(1, static_cast<int>(std::lround(patch.height * factor)));
    Image small = resize_bilinear(patch, small_w, small_h);
    return resize_bilinear(small, patch.width, patch.height);
}

Image apply_jpeg(const Image& patch, int quality) {
    return decode_image_bytes(encode_jpeg(patch, quality));
}

Image apply_post_process(const Image& patch, const PostProcessSpec& spec) {
    switch (spec.kind) {
        case PostProcessKind::none:
            return patch;
        case PostProcessKind::upscale:
            return apply_upscale(patch, spec.factor, spec.rng_seed);
        case PostProcessKind::down_upscale:
            return apply_down_upscale(patch, spec.factor);
        case PostProcessKind::jpeg:
            return apply_jpeg(patch, spec.quality);
    }
    return patch;
}

DatasetManifest materialize_augmented(const DatasetManifest& manifest, const PostProcessSpec& spec,
                                      const std::string& out_dir) {
    fs::create_directories(out_dir);
    std::string tag = spec.to_string();
    DatasetManifest derived;
    derived.base_dir = out_dir;
    derived.patch_size = manifest.patch_size;
    for (const auto& rec : manifest.records) {
        Image img = decode_image(manifest.resolve_path(rec));
        SampleRecord out = rec;
        out.id = rec.id + "__" + tag;
        out.origin_id = rec.id;
        out.post_process = tag;
        if (spec.kind == PostProcessKind::jpeg) {
            // the .jpg file itself is the compressed image; no second pass
            out.path = out.id + ".jpg";
            write_jpeg(img, (fs::path(out_dir) / out.path).string(), spec.quality);
            out.width = img.width;
            out.height = img.height;
        } else {
            PostProcessSpec per_image = spec;
            per_image.rng_seed = derive_seed(spec.rng_seed, rec.id);
            Image processed = apply_post_process(img, per_image);
            out.path = out.id + ".png";
            write_png(processed, (fs::path(out_dir) / out.path).string());
            out.width = processed.width;
            out.height = processed.height;
        }
        derived.records.push_back(std::move(out));
    }
    save_manifest(derived, (fs::path(out_dir) / "manifest.jsonl").string());
    return derived;
}

}  // namespace wb
