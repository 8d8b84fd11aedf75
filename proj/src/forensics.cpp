#include "huescan/forensics.hpp"

#include <charconv>

#include "huescan/errors.hpp"

namespace huescan {

namespace {

void validate_region(const RegionSpec& r, int img_w, int img_h) {
    if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 || r.x + r.width > img_w ||
        r.y + r.height > img_h) {
        throw OutOfBounds("region " + std::to_string(r.x) + "," + std::to_string(r.y) + "," +
                          std::to_string(r.width) + "," + std::to_string(r.height) +
                          " not inside " + std::to_string(img_w) + "x" + std::to_string(img_h));
    }
    if (static_cast<long long>(r.width) * r.height < 16) {
        throw RegionTooSmall("region area must be at least 16 pixels");
    }
}

// Region pixels straight from the raster: identical to
// region_cloud(dense_cloud(img), r) without materializing the full cloud.
PixelCloud raster_region(const Raster& img, const RegionSpec& r) {
    PixelCloud out;
    out.width = r.width;
    out.height = r.height;
    out.source_pixel_count = static_cast<std::size_t>(r.width) * r.height;
    out.pixels.reserve(out.source_pixel_count);
    for (int y = r.y; y < r.y + r.height; ++y) {
        for (int x = r.x; x < r.x + r.width; ++x) {
            const Rgba8& px = img.at(x, y);
            out.pixels.push_back(rgb_to_hsv({px.r, px.g, px.b}));
        }
    }
    return out;
}

PixelCloud subsample(const PixelCloud& cloud, std::size_t max_pixels) {
    if (max_pixels == 0 || cloud.pixels.size() <= max_pixels) {
        return cloud;
    }
    const std::size_t stride = (cloud.pixels.size() + max_pixels - 1) / max_pixels;
    PixelCloud out;
    out.width = cloud.width;
    out.height = cloud.height;
    out.source_pixel_count = cloud.source_pixel_count;
    for (std::size_t i = 0; i < cloud.pixels.size(); i += stride) {
        out.pixels.push_back(cloud.pixels[i]);
    }
    return out;
}

ChannelHistograms region_histograms(const Raster& img, const RegionSpec& r) {
    ChannelHistograms h;
    for (int y = r.y; y < r.y + r.height; ++y) {
        for (int x = r.x; x < r.x + r.width; ++x) {
            const Rgba8& px = img.at(x, y);
            h.r[px.r / 16] += 1.0;
            h.g[px.g / 16] += 1.0;
            h.b[px.b / 16] += 1.0;
        }
    }
    const double n = static_cast<double>(r.width) * r.height;
    for (int bin = 0; bin < 16; ++bin) {
        h.r[bin] /= n;
        h.g[bin] /= n;
        h.b[bin] /= n;
    }
    return h;
}

int parse_component(std::string_view text, std::string_view what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("region " + std::string(what) + ": expected integer, got \"" +
                         std::string(text) + "\"");
    }
    return value;
}

} // namespace

RegionSpec parse_region(const std::string& text) {
    std::array<std::string_view, 4> parts;
    std::string_view rest = text;
    for (int i = 0; i < 4; ++i) {
        const std::size_t comma = rest.find(',');
        if (i < 3 && comma == std::string_view::npos) {
            throw ParseError("region \"" + text + "\": expected x,y,w,h");
        }
        if (i == 3 && comma != std::string_view::npos) {
            throw ParseError("region \"" + text + "\": too many components");
        }
        parts[i] = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    return {parse_component(parts[0], "x"), parse_component(parts[1], "y"),
            parse_component(parts[2], "w"), parse_component(parts[3], "h")};
}

PixelCloud region_cloud(const PixelCloud& cloud, const RegionSpec& r) {
    if (!cloud.dense()) {
        throw Error("region extraction needs a dense cloud (no subsampling, no dropped pixels)");
    }
    validate_region(r, cloud.width, cloud.height);
    PixelCloud out;
    out.width = r.width;
    out.height = r.height;
    out.source_pixel_count = static_cast<std::size_t>(r.width) * r.height;
    out.pixels.reserve(out.source_pixel_count);
    for (int y = r.y; y < r.y + r.height; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * cloud.width;
        for (int x = r.x; x < r.x + r.width; ++x) {
            out.pixels.push_back(cloud.pixels[row + x]);
        }
    }
    return out;
}

ForensicsReport compare_regions(const std::vector<std::uint8_t>& image_bytes, const RegionSpec& a,
                                const RegionSpec& b, const ForensicsConfig& config) {
    const Raster img = decode_image(image_bytes);
    validate_region(a, img.width, img.height);
    validate_region(b, img.width, img.height);

    QuantizeConfig qc;
    qc.k = config.k;
    qc.seed = config.seed;
    qc.max_pixels = config.max_pixels;

    ForensicsReport report;
    report.region_a = a;
    report.region_b = b;
    report.palette_a = kmeans_palette(subsample(raster_region(img, a), config.max_pixels), qc);
    report.palette_b = kmeans_palette(subsample(raster_region(img, b), config.max_pixels), qc);
    report.distance = palette_distance(report.palette_a, report.palette_b);
    report.delta_used = config.delta;
    report.verdict = report.distance > config.delta ? "inconsistent" : "consistent";
    report.histograms_a = region_histograms(img, a);
    report.histograms_b = region_histograms(img, b);
    return report;
}

} // namespace huescan
