#include "huescan/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "huescan/errors.hpp"

namespace huescan {

namespace {

constexpr int kSvgWidth = 640;
constexpr int kSvgHeight = 480;
constexpr double kMargin = 30.0;
// Oblique projection constants: half-length receding axis at 30 degrees.
const double kDepthU = 0.5 * std::cos(3.14159265358979323846 / 6.0);
const double kDepthV = 0.5 * std::sin(3.14159265358979323846 / 6.0);

struct Bounds {
    double umin, umax, vmin, vmax;
};

struct Xyz {
    double x, y, z;
};

Xyz space_coords(const Hsv& p, bool rgb_space) {
    if (rgb_space) {
        const Rgb8 c = hsv_to_rgb(p);
        return {c.r / 255.0, c.g / 255.0, c.b / 255.0};
    }
    const CylPoint c = hsv_to_cyl(p);
    return {c.x, c.y, c.z};
}

// Bounds come from the full extent of the space, not the data, so the frame
// is identical for every image. x, y range over [lo, 1], z over [0, 1].
Bounds space_bounds(bool rgb_space) {
    const double lo = rgb_space ? 0.0 : -1.0;
    return {lo * (1.0 + kDepthU), 1.0 + kDepthU, lo * kDepthV, 1.0 + kDepthV};
}

std::string hex_color(const Hsv& p) {
    const Rgb8 c = hsv_to_rgb(p);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

} // namespace

std::string scatter_svg(const PixelCloud& cloud, const Palette& palette, const std::string& space,
                        std::size_t max_points) {
    bool rgb_space = false;
    if (space == "rgb") {
        rgb_space = true;
    } else if (space != "hsv") {
        throw ParseError("scatter space must be \"hsv\" or \"rgb\", got \"" + space + "\"");
    }

    const Bounds b = space_bounds(rgb_space);
    const double sx = (kSvgWidth - 2 * kMargin) / (b.umax - b.umin);
    const double sy = (kSvgHeight - 2 * kMargin) / (b.vmax - b.vmin);
    auto project = [&](const Xyz& p) {
        const double u = p.x + kDepthU * p.y;
        const double v = p.z + kDepthV * p.y;
        return std::array<double, 2>{kMargin + (u - b.umin) * sx,
                                     kSvgHeight - kMargin - (v - b.vmin) * sy};
    };

    std::ostringstream svg;
    svg.precision(2);
    svg << std::fixed;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSvgWidth << "\" height=\""
        << kSvgHeight << "\" viewBox=\"0 0 " << kSvgWidth << ' ' << kSvgHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // Axis triad from the space origin.
    const double o = rgb_space ? 0.0 : -1.0;
    const Xyz origin{o, o, 0.0};
    const std::array<std::pair<Xyz, const char*>, 3> axes{{
        {{1.0, o, 0.0}, "x"},
        {{o, 1.0, 0.0}, "y"},
        {{o, o, 1.0}, "z"},
    }};
    const auto po = project(origin);
    for (const auto& [tip, label] : axes) {
        const auto pt = project(tip);
        svg << "<line x1=\"" << po[0] << "\" y1=\"" << po[1] << "\" x2=\"" << pt[0] << "\" y2=\""
            << pt[1] << "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << pt[0] << "\" y=\"" << pt[1]
            << "\" font-size=\"12\" fill=\"#555555\">" << label << "</text>\n";
    }

    const std::size_t n = cloud.pixels.size();
    const std::size_t stride = n > max_points ? (n + max_points - 1) / max_points : 1;
    for (std::size_t i = 0; i < n; i += stride) {
        const auto pt = project(space_coords(cloud.pixels[i], rgb_space));
        svg << "<circle cx=\"" << pt[0] << "\" cy=\"" << pt[1]
            << "\" r=\"1.5\" fill-opacity=\"0.6\" fill=\"" << hex_color(cloud.pixels[i])
            << "\"/>\n";
    }
    for (const PaletteEntry& e : palette.entries) {
        const auto pt = project(space_coords(e.centroid, rgb_space));
        svg << "<circle cx=\"" << pt[0] << "\" cy=\"" << pt[1]
            << "\" r=\"6\" stroke=\"#000000\" stroke-width=\"1.5\" fill=\""
            << hex_color(e.centroid) << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

Raster palette_swatch(const Palette& palette, const std::vector<bool>& highlight, int width,
                      int height) {
    if (width <= 0 || height <= 0) {
        throw Error("swatch dimensions must be positive");
    }
    Raster img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, Rgba8{255, 255, 255, 255});

    const Rgba8 green{0, 192, 0, 255};
    double cum = 0.0;
    int x0 = 0;
    for (std::size_t i = 0; i < palette.entries.size(); ++i) {
        cum += palette.entries[i].weight;
        const int x1 = i + 1 == palette.entries.size()
                           ? width
                           : std::min(width, static_cast<int>(std::lround(cum * width)));
        const Rgb8 c = hsv_to_rgb(palette.entries[i].centroid);
        const bool mark = i < highlight.size() && highlight[i];
        for (int y = 0; y < height; ++y) {
            for (int x = x0; x < x1; ++x) {
                const bool border =
                    mark && (x - x0 < 3 || x1 - 1 - x < 3 || y < 3 || height - 1 - y < 3);
                img.at(x, y) = border ? green : Rgba8{c.r, c.g, c.b, 255};
            }
        }
        x0 = x1;
    }
    return img;
}

} // namespace huescan
