#pragma once

#include "hoi/common.hpp"

#include <png.h>

#include <array>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

namespace hoi {

/// Row-major 8-bit raster; `x` is the column, `y` the row.
template <int Channels>
struct Image8 {
    int width = 0, height = 0;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h, std::uint8_t fill = 0) : width(w), height(h), data(std::size_t(w) * h * Channels, fill) {
        require(w >= 0 && h >= 0, "image size must be non-negative");
    }

    bool in_bounds(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
    std::uint8_t& at(int x, int y, int c = 0) { return data[(std::size_t(y) * width + x) * Channels + c]; }
    std::uint8_t at(int x, int y, int c = 0) const { return data[(std::size_t(y) * width + x) * Channels + c]; }
    bool operator==(const Image8& o) const { return width == o.width && height == o.height && data == o.data; }
};

using RgbImage = Image8<3>;

/// Foreground is any nonzero pixel.
struct BinaryImage : Image8<1> {
    using Image8<1>::Image8;

    bool on(int x, int y) const { return in_bounds(x, y) && at(x, y) != 0; }
    void set(int x, int y, bool v = true) { at(x, y) = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto v : data) n += v != 0;
        return n;
    }

    /// Mean pixel center of the foreground; invalid-input when empty.
    Vec2 centroid() const {
        Vec2 sum = Vec2::Zero();
        std::size_t n = 0;
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (at(x, y)) {
                    sum += Vec2(x + 0.5, y + 0.5);
                    ++n;
                }
        require(n > 0, "mask is empty");
        return sum / double(n);
    }

    /// Foreground pixels with a background (or out-of-image) 4-neighbor.
    Points2 boundary_pixel_centers() const {
        Points2 out;
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (at(x, y) && (!on(x - 1, y) || !on(x + 1, y) || !on(x, y - 1) || !on(x, y + 1)))
                    out.emplace_back(x + 0.5, y + 0.5);
        return out;
    }

    /// Content moved by an integer offset; pixels shifted out are lost.
    BinaryImage shifted(int dx, int dy) const {
        BinaryImage out(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                if (at(x, y) && out.in_bounds(x + dx, y + dy)) out.set(x + dx, y + dy);
        return out;
    }
};

inline double silhouette_iou(const BinaryImage& a, const BinaryImage& b) {
    require(a.width == b.width && a.height == b.height, "silhouette sizes differ");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const bool x = a.data[i] != 0, y = b.data[i] != 0;
        inter += x && y;
        uni += x || y;
    }
    return uni == 0 ? 0.0 : double(inter) / double(uni);
}

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};

inline void write_png_rows(const std::filesystem::path& path, int width, int height, int color_type,
                           const std::vector<std::uint8_t>& bytes, int channels) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::unique_ptr<std::FILE, FileCloser> fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail(ErrorKind::Io, "cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::Io, "libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(ErrorKind::Io, "failed writing " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(bytes.data() + std::size_t(y) * width * channels));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace detail

/// Reads any PNG and thresholds its luminance (or alpha, if present) at > 0.
inline BinaryImage read_png_mask(const std::filesystem::path& path) {
    std::unique_ptr<std::FILE, detail::FileCloser> fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail(ErrorKind::Io, "cannot open " + path.string());
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorKind::Io, "libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(ErrorKind::Io, "not a readable PNG: " + path.string());
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA || color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);
    const int channels = png_get_channels(png, info);
    std::vector<std::uint8_t> row(png_get_rowbytes(png, info));
    BinaryImage mask(width, height);
    for (int y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (int x = 0; x < width; ++x) {
            // Gray+alpha: foreground needs both channels nonzero.
            const std::uint8_t v = channels == 2 ? std::min(row[x * 2], row[x * 2 + 1]) : row[x * channels];
            mask.set(x, y, v != 0);
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    return mask;
}

inline void write_png_mask(const BinaryImage& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes(mask.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
    detail::write_png_rows(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, bytes, 1);
}

inline void write_png_rgb(const RgbImage& image, const std::filesystem::path& path) {
    detail::write_png_rows(path, image.width, image.height, PNG_COLOR_TYPE_RGB, image.data, 3);
}

}  // namespace hoi
