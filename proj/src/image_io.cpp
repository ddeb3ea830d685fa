#include "wb/image_io.hpp"

#include <csetjmp>
#include <cstdio>
#include <filesystem>

#include <jpeglib.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "wb/errors.hpp"

namespace wb {

Image make_image(int width, int height, int channels, uint8_t fill) {
    Image img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<size_t>(width) * height * channels, fill);
    return img;
}

Plane make_plane(int width, int height, double fill) {
    Plane p;
    p.width = width;
    p.height = height;
    p.values.assign(static_cast<size_t>(width) * height, fill);
    return p;
}

RowMatrix make_matrix(int rows, int cols, double fill) {
    RowMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.data.assign(static_cast<size_t>(rows) * cols, fill);
    return m;
}

namespace {

Image from_mat(const cv::Mat& mat, const std::string& origin) {
    if (mat.empty()) fail(Errc::missing_file, "cannot decode image: " + origin);
    if (mat.depth() != CV_8U) fail(Errc::schema, "unsupported bit depth (8-bit only): " + origin);
    if (mat.channels() != 1 && mat.channels() != 3)
        fail(Errc::schema, "unsupported channel count " + std::to_string(mat.channels()) + ": " + origin);

    cv::Mat rgb;
    if (mat.channels() == 3)
        cv::cvtColor(mat, rgb, cv::COLOR_BGR2RGB);
    else
        rgb = mat;

    Image img = make_image(rgb.cols, rgb.rows, rgb.channels());
    for (int y = 0; y < rgb.rows; ++y) {
        const uint8_t* row = rgb.ptr<uint8_t>(y);
        std::copy(row, row + static_cast<size_t>(rgb.cols) * rgb.channels(),
                  img.data.begin() + static_cast<size_t>(y) * rgb.cols * rgb.channels());
    }
    return img;
}

cv::Mat to_mat_bgr(const Image& image) {
    cv::Mat mat(image.height, image.width, image.channels == 3 ? CV_8UC3 : CV_8UC1);
    for (int y = 0; y < image.height; ++y) {
        uint8_t* row = mat.ptr<uint8_t>(y);
        std::copy(image.data.begin() + static_cast<size_t>(y) * image.width * image.channels,
                  image.data.begin() + static_cast<size_t>(y + 1) * image.width * image.channels, row);
    }
    if (image.channels == 3) cv::cvtColor(mat, mat, cv::COLOR_RGB2BGR);
    return mat;
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

}  // namespace

Image decode_image(const std::string& path) {
    if (!std::filesystem::exists(path)) fail(Errc::missing_file, "no such file: " + path);
    cv::Mat mat = cv::imread(path, cv::IMREAD_UNCHANGED);
    return from_mat(mat, path);
}

Image decode_image_bytes(const std::vector<uint8_t>& bytes) {
    cv::Mat mat = cv::imdecode(cv::Mat(1, static_cast<int>(bytes.size()), CV_8UC1,
                                       const_cast<uint8_t*>(bytes.data())),
                               cv::IMREAD_UNCHANGED);
    return from_mat(mat, "<memory>");
}

void write_png(const Image& image, const std::string& path) {
    if (image.empty()) fail(Errc::generic, "refusing to write empty image: " + path);
    if (!cv::imwrite(path, to_mat_bgr(image))) fail(Errc::generic, "png write failed: " + path);
}

std::vector<uint8_t> encode_jpeg(const Image& image, int quality) {
    if (quality < 1 || quality > 100) fail(Errc::invalid_config, "jpeg quality out of range [1,100]");
    if (image.channels != 1 && image.channels != 3) fail(Errc::schema, "jpeg encode expects 1 or 3 channels");

    jpeg_compress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.pub);
    err.pub.error_exit = jpeg_error_exit;

    unsigned char* out_buf = nullptr;
    unsigned long out_size = 0;
    if (setjmp(err.jump)) {
        jpeg_destroy_compress(&cinfo);
        if (out_buf) std::free(out_buf);
        fail(Errc::generic, "jpeg encode failed");
    }

    jpeg_create_compress(&cinfo);
    jpeg_mem_dest(&cinfo, &out_buf, &out_size);

    cinfo.image_width = static_cast<JDIMENSION>(image.width);
    cinfo.image_height = static_cast<JDIMENSION>(image.height);
    cinfo.input_components = image.channels;
    cinfo.in_color_space = image.channels == 3 ? JCS_RGB : JCS_GRAYSCALE;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE /* baseline */);
    if (image.channels == 3) {
        // 4:2:0 below quality 100, 4:4:4 at 100
        int luma = quality < 100 ? 2 : 1;
        cinfo.comp_info[0].h_samp_factor = luma;
        cinfo.comp_info[0].v_samp_factor = luma;
        cinfo.comp_info[1].h_samp_factor = 1;
        cinfo.comp_info[1].v_samp_factor = 1;
        cinfo.comp_info[2].h_samp_factor = 1;
        cinfo.comp_info[2].v_samp_factor = 1;
    }

    jpeg_start_compress(&cinfo, TRUE);
    std::vector<uint8_t> row(static_cast<size_t>(image.width) * image.channels);
    while (cinfo.next_scanline < cinfo.image_height) {
        const uint8_t* src = image.data.data() +
                             static_cast<size_t>(cinfo.next_scanline) * image.width * image.channels;
        std::copy(src, src + row.size(), row.data());
        JSAMPROW rows[1] = {row.data()};
        jpeg_write_scanlines(&cinfo, rows, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);

    std::vector<uint8_t> bytes(out_buf, out_buf + out_size);
    std::free(out_buf);
    return bytes;
}

void write_jpeg(const Image& image, const std::string& path, int quality) {
    std::vector<uint8_t> bytes = encode_jpeg(image, quality);
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) fail(Errc::generic, "cannot open for write: " + path);
    size_t n = std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (n != bytes.size()) fail(Errc::generic, "short write: " + path);
}

Image resize_bilinear(const Image& image, int new_width, int new_height) {
    cv::Mat src = to_mat_bgr(image);
    cv::Mat dst;
    cv::resize(src, dst, cv::Size(new_width, new_height), 0, 0, cv::INTER_LINEAR);
    return from_mat(dst, "<resize>");
}

}  // namespace wb
