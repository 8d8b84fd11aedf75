#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "huescan/quantize.hpp"

namespace huescan {

/// Color-ratio fingerprint of a symbol of interest, extracted from a
/// reference image. Palette entries with weight >= w_min are the "required"
/// colors a candidate tile must contain.
struct SymbolSignature {
    std::string name;
    Palette palette;
    double w_min = 0.10;
    double per_color_tolerance = 0.12; // cylindrical radius for pixel matching
};

struct TileRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

/// Disjoint rectangular partition of an image; edge tiles may be smaller.
struct TileGrid {
    int tile_size = 0;
    std::vector<TileRect> tiles; // row-major
};

struct SymbolMatch {
    std::string symbol_name;
    int tile_x = 0;
    int tile_y = 0;
    double ratio_similarity = 0.0; // cosine over required-color fractions
    bool matched = false;
};

struct SymbolFlag {
    bool flagged = false;
    double best_similarity = 0.0;
};

struct MatchResult {
    std::vector<SymbolMatch> matches; // every (symbol, tile) pair, sorted
    std::map<std::string, SymbolFlag> flags;
};

struct MatchOptions {
    double theta = 0.90; // minimum ratio similarity for a tile match
    int tile_size = 0;   // 0: max(32, min(width, height) / 8)
};

/// One symbol database row: the signature plus optional per-symbol theta.
struct SymbolDbEntry {
    SymbolSignature signature;
    std::optional<double> theta;
};

/// Quantizes a reference image into a signature. Transparent background
/// pixels are excluded by the loader. Throws DecodeError/EmptyImage.
SymbolSignature signature_from_image(const std::vector<std::uint8_t>& image_bytes,
                                     const std::string& name, const QuantizeConfig& config,
                                     double w_min = 0.10, double per_color_tolerance = 0.12);

int default_tile_size(int width, int height);
TileGrid make_tile_grid(int width, int height, int tile_size = 0);

/// Scores one tile against one signature. A required color is "present"
/// when more than 1% of tile pixels sit within the tolerance radius of it
/// (nearest-required-centroid assignment, so fractions are disjoint).
SymbolMatch match_tile(const PixelCloud& tile_pixels, const SymbolSignature& sig,
                       double theta = 0.90);

/// Evaluates every (tile, signature) pair over the image and aggregates
/// image-level flags. Matches are sorted by (symbol_name, tile row-major).
MatchResult match_symbols(const std::vector<std::uint8_t>& image_bytes,
                          const std::vector<SymbolDbEntry>& signatures,
                          const MatchOptions& options = {});

/// Loads a symbol database directory: reference images plus a symbols.json
/// manifest (format version 1) mapping image files to symbol names with
/// optional per-symbol overrides (k, w_min, tolerance, theta).
std::vector<SymbolDbEntry> load_symbol_db(const std::filesystem::path& dir,
                                          const QuantizeConfig& base_config);

} // namespace huescan
