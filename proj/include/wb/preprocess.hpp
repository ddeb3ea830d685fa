#pragma once

#include <string>

#include "wb/image.hpp"

namespace wb {

// 3×3 low-pass kernel: average of the 4-neighborhood, center tap zero.
inline constexpr double kLowPassKernel[3][3] = {
    {0.0, 0.25, 0.0},
    {0.25, 0.0, 0.25},
    {0.0, 0.25, 0.0},
};

// High-pass residual quantized to 8 bits around a recorded mid-gray offset.
struct ResidualImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;
    int offset_applied = 128;

    uint8_t at(int y, int x) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct PreprocessConfig {
    int quant_offset = 128;
};

// BT.601 luma (0.299, 0.587, 0.114), kept real-valued. 1-channel input passes through.
GrayImage to_gray(const Image& image);

// gray − (gray ⊛ kLowPassKernel) with replicate border padding. Range ⊆ [−255, 255].
Plane highpass_residual(const GrayImage& gray);

// clamp(round(r) + offset, 0, 255); rounding is half-away-from-zero.
ResidualImage quantize_residual(const Plane& residual, int offset = 128);

ResidualImage preprocess_patch(const Image& image, const PreprocessConfig& cfg = {});

// Debug rendering of the offset-mapped residual.
void dump_residual_png(const ResidualImage& residual, const std::string& path);

}  // namespace wb
