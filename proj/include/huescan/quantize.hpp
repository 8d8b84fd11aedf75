#pragma once

#include <cstdint>
#include <vector>

#include "huescan/colorspace.hpp"
#include "huescan/image.hpp"

namespace huescan {

/// Pixel colors of one image in HSV, row-major. The sequence may be shorter
/// than width*height after stride subsampling or dropping transparent
/// pixels; source_pixel_count keeps the original count. A cloud whose length
/// equals width*height is "dense" and supports region extraction.
struct PixelCloud {
    int width = 0;
    int height = 0;
    std::vector<Hsv> pixels;
    std::size_t source_pixel_count = 0;

    bool dense() const {
        return pixels.size() == static_cast<std::size_t>(width) * height;
    }
};

struct QuantizeConfig {
    int k = 5; // recommended range 4-6
    std::uint64_t seed = 0;
    int max_iter = 100;
    double tol = 1e-4; // centroid movement, cylindrical units
    int n_init = 5;
    std::size_t max_pixels = 100000;
};

struct PaletteEntry {
    Hsv centroid;
    double weight = 0.0;

    friend bool operator==(const PaletteEntry&, const PaletteEntry&) = default;
};

/// Weighted summative palette. Weights sum to 1; entries are sorted by
/// weight descending with ties broken by (h, s, v) ascending so serialized
/// reports are reproducible.
struct Palette {
    std::vector<PaletteEntry> entries;
    int effective_k = 0;

    friend bool operator==(const Palette&, const Palette&) = default;
};

/// Decodes image bytes and builds the pixel cloud: row-major HSV, every
/// ceil(N/max_pixels)-th pixel when the image exceeds the cap, pixels with
/// alpha < 128 dropped. Throws DecodeError or EmptyImage.
PixelCloud load_pixels(const std::vector<std::uint8_t>& bytes, const QuantizeConfig& config);

/// Same subsampling/alpha policy applied to an already decoded raster.
PixelCloud cloud_from_raster(const Raster& img, std::size_t max_pixels);

/// Full-grid cloud (no subsampling, alpha ignored); required by region
/// extraction, which indexes pixels by coordinate.
PixelCloud dense_cloud(const Raster& img);

/// Lloyd's k-means over the cylindrical embedding with k-means++ seeding,
/// best of n_init deterministic restarts. When the cloud has fewer than k
/// distinct colors the palette is those colors exactly. Pixel order never
/// affects the result: clustering runs on the sorted set of distinct colors
/// weighted by their counts.
Palette kmeans_palette(const PixelCloud& cloud, const QuantizeConfig& config);

/// Within-cluster sum of squares of a cloud against a palette's centroids
/// (nearest-centroid assignment, cylindrical space). At convergence this is
/// the k-means objective of the returned palette.
double kmeans_objective(const PixelCloud& cloud, const Palette& palette);

/// Exact optimal-transport cost between two weighted centroid sets, ground
/// distance Euclidean in the cylindrical embedding. Symmetric, zero iff the
/// palettes are identical as weighted sets, and a true metric.
double palette_distance(const Palette& a, const Palette& b);

namespace detail {

/// One distinct color and how many cloud pixels carry it.
struct WeightedColor {
    Hsv color;
    CylPoint point;
    double count = 0.0;
};

/// Sorted distinct colors of a cloud; the canonical clustering input.
std::vector<WeightedColor> unique_colors(const PixelCloud& cloud);

struct LloydResult {
    std::vector<CylPoint> centroids;
    std::vector<int> assignment; // per unique color
    double wcss = 0.0;
    std::vector<double> wcss_trace; // per iteration, non-increasing
};

/// Single seeded restart: k-means++ init then Lloyd iterations. Exposed so
/// tests can check the per-iteration objective trace.
LloydResult lloyd_restart(const std::vector<WeightedColor>& colors, int k, std::uint64_t seed,
                          int max_iter, double tol);

} // namespace detail

} // namespace huescan
