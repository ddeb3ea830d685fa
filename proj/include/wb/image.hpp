#pragma once

#include <cstdint>
#include <vector>

namespace wb {

// 8-bit image, interleaved rows, 1 (gray) or 3 (RGB) channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<uint8_t> data;

    uint8_t& at(int y, int x, int c = 0) { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
    uint8_t at(int y, int x, int c = 0) const { return data[(static_cast<size_t>(y) * width + x) * channels + c]; }
    bool empty() const { return data.empty(); }
};

Image make_image(int width, int height, int channels, uint8_t fill = 0);

// H×W plane of doubles, row-major. Grayscale planes and residuals share it.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double& at(int y, int x) { return values[static_cast<size_t>(y) * width + x]; }
    double at(int y, int x) const { return values[static_cast<size_t>(y) * width + x]; }
};

using GrayImage = Plane;

Plane make_plane(int width, int height, double fill = 0.0);

// Dense row-major matrix used for feature sets and PCA inputs.
struct RowMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
    const double* row(int r) const { return data.data() + static_cast<size_t>(r) * cols; }
};

RowMatrix make_matrix(int rows, int cols, double fill = 0.0);

}  // namespace wb
