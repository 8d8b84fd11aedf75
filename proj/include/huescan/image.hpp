#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "huescan/colorspace.hpp"

namespace huescan {

struct Rgba8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    friend bool operator==(const Rgba8&, const Rgba8&) = default;
};

/// Decoded raster: full row-major RGBA grid, before any subsampling.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<Rgba8> pixels;

    const Rgba8& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    Rgba8& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Decodes PNG, JPEG, GIF (first frame), BMP or WebP bytes.
/// Throws DecodeError on anything unsupported or corrupt.
Raster decode_image(const std::vector<std::uint8_t>& bytes);

/// Encodes a raster as PNG (alpha preserved when any pixel has a < 255).
std::vector<std::uint8_t> encode_png(const Raster& img);

/// Reads a whole file; throws DecodeError if it cannot be opened.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

namespace detail {
/// Minimal GIF87a/89a decoder, first frame only, drawn onto a transparent
/// logical screen. Exposed for direct testing.
Raster decode_gif_first_frame(const std::vector<std::uint8_t>& bytes);
bool looks_like_gif(const std::vector<std::uint8_t>& bytes);
} // namespace detail

} // namespace huescan
