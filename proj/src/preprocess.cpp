#include "wb/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "wb/errors.hpp"
#include "wb/image_io.hpp"

namespace wb {

GrayImage to_gray(const Image& image) {
    if (image.channels != 1 && image.channels != 3)
        fail(Errc::schema, "to_gray: unsupported channel count " + std::to_string(image.channels));
    GrayImage gray = make_plane(image.width, image.height);
    size_t n = static_cast<size_t>(image.width) * image.height;
    if (image.channels == 1) {
        for (size_t i = 0; i < n; ++i) gray.values[i] = static_cast<double>(image.data[i]);
    } else {
        for (size_t i = 0; i < n; ++i) {
            const uint8_t* px = image.data.data() + i * 3;
            gray.values[i] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        }
    }
    return gray;
}

Plane highpass_residual(const GrayImage& gray) {
    if (gray.width < 2 || gray.height < 2) fail(Errc::schema, "highpass_residual: image must be at least 2x2");
    const int w = gray.width, h = gray.height;
    Plane res = make_plane(w, h);
    auto clamp_x = [w](int x) { return std::clamp(x, 0, w - 1); };
    auto clamp_y = [h](int y) { return std::clamp(y, 0, h - 1); };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double low = 0.25 * (gray.at(clamp_y(y - 1), x) + gray.at(clamp_y(y + 1), x) +
                                 gray.at(y, clamp_x(x - 1)) + gray.at(y, clamp_x(x + 1)));
            res.at(y, x) = gray.at(y, x) - low;
        }
    }
    return res;
}

ResidualImage quantize_residual(const Plane& residual, int offset) {
    ResidualImage out;
    out.width = residual.width;
    out.height = residual.height;
    out.offset_applied = offset;
    out.pixels.resize(residual.values.size());
    for (size_t i = 0; i < residual.values.size(); ++i) {
        double v = residual.values[i];
        if (!std::isfinite(v)) fail(Errc::numeric, "quantize_residual: non-finite residual value");
        // std::round is half-away-from-zero, the documented rule
        double q = std::round(v) + offset;
        out.pixels[i] = static_cast<uint8_t>(std::clamp(q, 0.0, 255.0));
    }
    return out;
}

ResidualImage preprocess_patch(const Image& image, const PreprocessConfig& cfg) {
    return quantize_residual(highpass_residual(to_gray(image)), cfg.quant_offset);
}

void dump_residual_png(const ResidualImage& residual, const std::string& path) {
    Image img = make_image(residual.width, residual.height, 1);
    std::copy(residual.pixels.begin(), residual.pixels.end(), img.data.begin());
    write_png(img, path);
}

}  // namespace wb
