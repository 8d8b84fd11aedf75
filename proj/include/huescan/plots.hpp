#pragma once

#include <string>
#include <vector>

#include "huescan/image.hpp"
#include "huescan/quantize.hpp"

namespace huescan {

/// 3D scatter of the pixel cloud with enlarged centroid markers, rendered to
/// SVG through a fixed oblique (cavalier) projection:
///   u = x + 0.5*cos(30 deg)*depth,  v = z + 0.5*sin(30 deg)*depth
/// with the SVG y axis flipped. space selects the coordinates: "hsv" plots
/// the cylindrical embedding (s*cos h, s*sin h, v), "rgb" plots channel
/// values scaled to [0, 1]. At most max_points cloud points are drawn
/// (stride-subsampled); points carry their own pixel color.
std::string scatter_svg(const PixelCloud& cloud, const Palette& palette, const std::string& space,
                        std::size_t max_points = 5000);

/// Palette swatch strip: one cell per entry, left to right in palette order,
/// widths proportional to weight (boundaries at round(cum_weight * width)).
/// Cells whose index is set in highlight get a green inset outline.
Raster palette_swatch(const Palette& palette, const std::vector<bool>& highlight, int width = 512,
                      int height = 64);

} // namespace huescan
