#include "huescan/monk.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "huescan/errors.hpp"

namespace huescan {

MonkBand band_from_hex(const std::string& hex, int tone_id, double h_halfwidth,
                       double s_halfwidth, double v_halfwidth) {
    std::string digits = hex;
    if (!digits.empty() && digits.front() == '#') {
        digits.erase(digits.begin());
    }
    if (digits.size() != 6) {
        throw ParseError("hex color must have 6 digits: \"" + hex + "\"");
    }
    std::uint32_t value = 0;
    for (char ch : digits) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        int digit;
        if (c >= '0' && c <= '9') {
            digit = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            digit = c - 'a' + 10;
        } else {
            throw ParseError("invalid hex digit in \"" + hex + "\"");
        }
        value = (value << 4) | static_cast<std::uint32_t>(digit);
    }
    if (h_halfwidth <= 0.0 || s_halfwidth <= 0.0 || v_halfwidth <= 0.0) {
        throw ParseError("band halfwidths must be positive");
    }

    MonkBand band;
    band.tone_id = tone_id;
    band.reference = rgb_to_hsv({static_cast<std::uint8_t>(value >> 16),
                                 static_cast<std::uint8_t>(value >> 8),
                                 static_cast<std::uint8_t>(value)});
    band.h_halfwidth = h_halfwidth;
    band.s_halfwidth = s_halfwidth;
    band.v_halfwidth = v_halfwidth;
    return band;
}

bool pixel_in_band(const Hsv& p, const MonkBand& b) {
    return circular_hue_distance(p.h, b.reference.h) <= b.h_halfwidth &&
           std::fabs(p.s - b.reference.s) <= b.s_halfwidth &&
           std::fabs(p.v - b.reference.v) <= b.v_halfwidth;
}

SkinFlagReport flag_skin(const PixelCloud& cloud, const MonkScaleConfig& scale) {
    SkinFlagReport report;
    report.tone_ids.reserve(scale.bands.size());
    for (const MonkBand& band : scale.bands) {
        report.tone_ids.push_back(band.tone_id);
    }
    report.per_tone_fraction.assign(scale.bands.size(), 0.0);
    report.tau_used = scale.tau;
    if (cloud.pixels.empty()) {
        return report;
    }

    std::size_t in_union = 0;
    std::vector<std::size_t> per_tone(scale.bands.size(), 0);
    for (const Hsv& px : cloud.pixels) {
        bool any = false;
        for (std::size_t b = 0; b < scale.bands.size(); ++b) {
            if (pixel_in_band(px, scale.bands[b])) {
                ++per_tone[b];
                any = true;
            }
        }
        if (any) {
            ++in_union;
        }
    }

    const double total = static_cast<double>(cloud.pixels.size());
    for (std::size_t b = 0; b < scale.bands.size(); ++b) {
        report.per_tone_fraction[b] = per_tone[b] / total;
    }
    report.total_matched_fraction = in_union / total;
    report.flagged = report.total_matched_fraction >= scale.tau;
    return report;
}

std::vector<bool> palette_band_matches(const Palette& palette, const MonkScaleConfig& scale) {
    std::vector<bool> out(palette.entries.size(), false);
    for (std::size_t i = 0; i < palette.entries.size(); ++i) {
        for (const MonkBand& band : scale.bands) {
            if (pixel_in_band(palette.entries[i].centroid, band)) {
                out[i] = true;
                break;
            }
        }
    }
    return out;
}

MonkScaleConfig load_monk_scale(const std::filesystem::path& path, double tau) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open monk scale file: " + path.string());
    }
    if (tau <= 0.0 || tau > 1.0) {
        throw ParseError("tau must be in (0, 1]");
    }

    MonkScaleConfig scale;
    scale.tau = tau;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream row(line);
        int tone_id;
        std::string hex;
        if (!(row >> tone_id)) {
            continue; // blank or comment-only line
        }
        if (!(row >> hex)) {
            throw ParseError("monk scale line " + std::to_string(lineno) + ": missing hex color");
        }
        double hw = 54.0;
        double sw = 0.15;
        double vw = 0.15;
        if (row >> hw) {
            if (!(row >> sw >> vw)) {
                throw ParseError("monk scale line " + std::to_string(lineno) +
                                 ": halfwidth overrides need all three values");
            }
        }
        std::string extra;
        if (row >> extra) {
            throw ParseError("monk scale line " + std::to_string(lineno) + ": trailing tokens");
        }
        scale.bands.push_back(band_from_hex(hex, tone_id, hw, sw, vw));
    }
    if (scale.bands.empty()) {
        throw ParseError("monk scale file has no bands: " + path.string());
    }
    return scale;
}

} // namespace huescan
