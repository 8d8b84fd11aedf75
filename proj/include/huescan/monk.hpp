#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "huescan/colorspace.hpp"
#include "huescan/quantize.hpp"

namespace huescan {

/// Tolerance band around one skin-tone reference color: an axis-aligned box
/// in HSV with the hue window wrapping modulo 360. Defaults are 15% of each
/// axis's full range (54 degrees, 0.15, 0.15).
struct MonkBand {
    int tone_id = 0;
    Hsv reference;
    double h_halfwidth = 54.0;
    double s_halfwidth = 0.15;
    double v_halfwidth = 0.15;
};

/// The loaded tone table plus the flagging threshold tau (pixel fraction).
struct MonkScaleConfig {
    std::vector<MonkBand> bands;
    double tau = 0.05;
};

struct SkinFlagReport {
    std::vector<int> tone_ids;             // band ids, same order as fractions
    std::vector<double> per_tone_fraction; // one per band, counted independently
    double total_matched_fraction = 0.0;   // union membership, each pixel once
    bool flagged = false;
    double tau_used = 0.0;
};

/// Parses a 6-digit hex color (case-insensitive, optional leading '#') into
/// a band. Throws ParseError on malformed input.
MonkBand band_from_hex(const std::string& hex, int tone_id = 0, double h_halfwidth = 54.0,
                       double s_halfwidth = 0.15, double v_halfwidth = 0.15);

bool pixel_in_band(const Hsv& p, const MonkBand& b);

/// Fraction of cloud pixels inside each band and inside the union of bands;
/// flagged when the union fraction reaches tau.
SkinFlagReport flag_skin(const PixelCloud& cloud, const MonkScaleConfig& scale);

/// Which palette centroids fall inside any band (swatch highlighting).
std::vector<bool> palette_band_matches(const Palette& palette, const MonkScaleConfig& scale);

/// Loads a scale from the plain-text table format:
///   # comment
///   tone_id hex [h_halfwidth s_halfwidth v_halfwidth]
/// Throws ParseError on malformed rows.
MonkScaleConfig load_monk_scale(const std::filesystem::path& path, double tau = 0.05);

} // namespace huescan
