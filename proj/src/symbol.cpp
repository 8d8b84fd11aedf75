#include "huescan/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "huescan/errors.hpp"

namespace huescan {

namespace {

std::vector<std::size_t> required_indices(const SymbolSignature& sig) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sig.palette.entries.size(); ++i) {
        if (sig.palette.entries[i].weight >= sig.w_min) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace

SymbolSignature signature_from_image(const std::vector<std::uint8_t>& image_bytes,
                                     const std::string& name, const QuantizeConfig& config,
                                     double w_min, double per_color_tolerance) {
    if (w_min <= 0.0 || per_color_tolerance <= 0.0) {
        throw Error("signature tolerances must be positive");
    }
    SymbolSignature sig;
    sig.name = name;
    sig.palette = kmeans_palette(load_pixels(image_bytes, config), config);
    sig.w_min = w_min;
    sig.per_color_tolerance = per_color_tolerance;
    if (required_indices(sig).empty()) {
        throw Error("signature \"" + name + "\" has no color with weight >= w_min");
    }
    return sig;
}

int default_tile_size(int width, int height) {
    return std::max(32, std::min(width, height) / 8);
}

TileGrid make_tile_grid(int width, int height, int tile_size) {
    if (width <= 0 || height <= 0) {
        throw Error("tile grid needs a non-empty image");
    }
    TileGrid grid;
    grid.tile_size = tile_size > 0 ? tile_size : default_tile_size(width, height);
    for (int y = 0; y < height; y += grid.tile_size) {
        for (int x = 0; x < width; x += grid.tile_size) {
            grid.tiles.push_back(
                {x, y, std::min(grid.tile_size, width - x), std::min(grid.tile_size, height - y)});
        }
    }
    return grid;
}

SymbolMatch match_tile(const PixelCloud& tile_pixels, const SymbolSignature& sig, double theta) {
    SymbolMatch match;
    match.symbol_name = sig.name;

    const std::vector<std::size_t> required = required_indices(sig);
    if (required.empty() || tile_pixels.pixels.empty()) {
        return match;
    }

    std::vector<CylPoint> centroids;
    std::vector<double> weights;
    centroids.reserve(required.size());
    for (std::size_t idx : required) {
        centroids.push_back(hsv_to_cyl(sig.palette.entries[idx].centroid));
        weights.push_back(sig.palette.entries[idx].weight);
    }

    const double tol2 = sig.per_color_tolerance * sig.per_color_tolerance;
    std::vector<std::size_t> counts(required.size(), 0);
    for (const Hsv& px : tile_pixels.pixels) {
        const CylPoint p = hsv_to_cyl(px);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = squared_distance(p, centroids[c]);
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        if (best <= tol2) {
            ++counts[best_c];
        }
    }

    const double total = static_cast<double>(tile_pixels.pixels.size());
    bool all_present = true;
    double dot = 0.0;
    double norm_f = 0.0;
    double norm_w = 0.0;
    for (std::size_t c = 0; c < required.size(); ++c) {
        const double f = counts[c] / total;
        all_present = all_present && f > 0.01;
        dot += f * weights[c];
        norm_f += f * f;
        norm_w += weights[c] * weights[c];
    }
    match.ratio_similarity =
        norm_f > 0.0 ? dot / (std::sqrt(norm_f) * std::sqrt(norm_w)) : 0.0;
    match.matched = all_present && match.ratio_similarity >= theta;
    return match;
}

MatchResult match_symbols(const std::vector<std::uint8_t>& image_bytes,
                          const std::vector<SymbolDbEntry>& signatures,
                          const MatchOptions& options) {
    if (signatures.empty()) {
        throw Error("match_symbols: no signatures supplied");
    }
    const Raster img = decode_image(image_bytes);
    const TileGrid grid = make_tile_grid(img.width, img.height, options.tile_size);

    // Tile clouds are shared across signatures.
    std::vector<PixelCloud> tiles(grid.tiles.size());
    for (std::size_t t = 0; t < grid.tiles.size(); ++t) {
        const TileRect& r = grid.tiles[t];
        PixelCloud& cloud = tiles[t];
        cloud.width = r.width;
        cloud.height = r.height;
        cloud.source_pixel_count = static_cast<std::size_t>(r.width) * r.height;
        for (int y = r.y; y < r.y + r.height; ++y) {
            for (int x = r.x; x < r.x + r.width; ++x) {
                const Rgba8& px = img.at(x, y);
                if (px.a < 128) {
                    continue;
                }
                cloud.pixels.push_back(rgb_to_hsv({px.r, px.g, px.b}));
            }
        }
    }

    std::vector<const SymbolDbEntry*> ordered;
    ordered.reserve(signatures.size());
    for (const auto& e : signatures) {
        ordered.push_back(&e);
    }
    std::sort(ordered.begin(), ordered.end(), [](const SymbolDbEntry* a, const SymbolDbEntry* b) {
        return a->signature.name < b->signature.name;
    });

    MatchResult result;
    result.matches.reserve(ordered.size() * grid.tiles.size());
    for (const SymbolDbEntry* entry : ordered) {
        const double theta = entry->theta.value_or(options.theta);
        SymbolFlag& flag = result.flags[entry->signature.name];
        for (std::size_t t = 0; t < grid.tiles.size(); ++t) {
            SymbolMatch match = match_tile(tiles[t], entry->signature, theta);
            match.tile_x = grid.tiles[t].x;
            match.tile_y = grid.tiles[t].y;
            flag.flagged = flag.flagged || match.matched;
            flag.best_similarity = std::max(flag.best_similarity, match.ratio_similarity);
            result.matches.push_back(std::move(match));
        }
    }
    return result;
}

std::vector<SymbolDbEntry> load_symbol_db(const std::filesystem::path& dir,
                                          const QuantizeConfig& base_config) {
    const std::filesystem::path manifest_path = dir / "symbols.json";
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(read_file(manifest_path));
    } catch (const DecodeError& e) {
        throw ManifestParseError(e.what());
    } catch (const nlohmann::json::exception& e) {
        throw ManifestParseError("symbols.json: " + std::string(e.what()));
    }

    if (!manifest.is_object() || manifest.value("version", 0) != 1) {
        throw ManifestParseError("symbols.json: expected object with \"version\": 1");
    }
    if (!manifest.contains("symbols") || !manifest["symbols"].is_array()) {
        throw ManifestParseError("symbols.json: missing \"symbols\" array");
    }

    std::vector<SymbolDbEntry> out;
    std::set<std::string> seen;
    for (const auto& row : manifest["symbols"]) {
        if (!row.is_object() || !row.contains("name") || !row.contains("image")) {
            throw ManifestParseError("symbols.json: each symbol needs \"name\" and \"image\"");
        }
        const std::string name = row["name"].get<std::string>();
        if (!seen.insert(name).second) {
            throw ManifestParseError("symbols.json: duplicate symbol name \"" + name + "\"");
        }

        QuantizeConfig config = base_config;
        config.k = row.value("k", config.k);
        const double w_min = row.value("w_min", 0.10);
        const double tolerance = row.value("tolerance", 0.12);

        SymbolDbEntry entry;
        entry.signature = signature_from_image(
            read_file(dir / row["image"].get<std::string>()), name, config, w_min, tolerance);
        if (row.contains("theta")) {
            entry.theta = row["theta"].get<double>();
        }
        out.push_back(std::move(entry));
    }
    if (out.empty()) {
        throw ManifestParseError("symbols.json: no symbols defined");
    }
    return out;
}

} // namespace huescan
