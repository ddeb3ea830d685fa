#pragma once

#include <string>
#include <vector>

#include "wb/image.hpp"

namespace wb {

// Decodes PNG or JPEG (baseline), 8-bit, 1 or 3 channels. 3-channel output is RGB.
Image decode_image(const std::string& path);
Image decode_image_bytes(const std::vector<uint8_t>& bytes);

void write_png(const Image& image, const std::string& path);

// Baseline JPEG with the standard IJG quality scaling. 3-channel input uses
// 4:2:0 chroma subsampling below quality 100 and 4:4:4 at 100; 1-channel
// input encodes as grayscale. Output bytes are identical across runs.
std::vector<uint8_t> encode_jpeg(const Image& image, int quality);
void write_jpeg(const Image& image, const std::string& path, int quality);

Image resize_bilinear(const Image& image, int new_width, int new_height);

}  // namespace wb
