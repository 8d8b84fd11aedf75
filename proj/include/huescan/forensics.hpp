#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "huescan/quantize.hpp"

namespace huescan {

/// Pixel rectangle in image coordinates. Must lie fully inside the image and
/// cover at least 16 pixels.
struct RegionSpec {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    friend bool operator==(const RegionSpec&, const RegionSpec&) = default;
};

/// Per-channel 16-bin histograms of a region (fractions, each channel sums
/// to 1). Auxiliary evidence only: no verdict is derived from these.
struct ChannelHistograms {
    std::array<double, 16> r{};
    std::array<double, 16> g{};
    std::array<double, 16> b{};
};

struct ForensicsConfig {
    int k = 4; // regions are more color-homogeneous than whole images
    double delta = 0.25;
    std::uint64_t seed = 0;
    std::size_t max_pixels = 100000;
};

struct ForensicsReport {
    RegionSpec region_a;
    RegionSpec region_b;
    Palette palette_a;
    Palette palette_b;
    double distance = 0.0;
    double delta_used = 0.0;
    std::string verdict; // "consistent" | "inconsistent"
    ChannelHistograms histograms_a;
    ChannelHistograms histograms_b;
};

/// Parses "x,y,w,h" into a RegionSpec. Throws ParseError.
RegionSpec parse_region(const std::string& text);

/// Extracts the row-major sub-cloud of a region. The input must be dense
/// (regions are addressed against original dimensions, so extraction happens
/// before any subsampling). Throws OutOfBounds / RegionTooSmall.
PixelCloud region_cloud(const PixelCloud& cloud, const RegionSpec& r);

/// Quantizes both regions with identical (k, seed) and compares the palettes
/// by exact transport distance; verdict is "inconsistent" iff the distance
/// exceeds delta. Alpha is ignored: forensics inspects stored color values.
ForensicsReport compare_regions(const std::vector<std::uint8_t>& image_bytes, const RegionSpec& a,
                                const RegionSpec& b, const ForensicsConfig& config = {});

} // namespace huescan
