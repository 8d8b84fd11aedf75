#include "huescan/colorspace.hpp"

#include <algorithm>

namespace huescan {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

std::uint8_t round_channel(double x) {
    long v = std::lround(x); // half away from zero
    return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}
} // namespace

Hsv rgb_to_hsv(Rgb8 c) {
    const int max = std::max({c.r, c.g, c.b});
    const int min = std::min({c.r, c.g, c.b});
    const int delta = max - min;

    Hsv out;
    out.v = max / 255.0;
    if (max == 0 || delta == 0) {
        return out; // gray or black: h = 0, s = 0
    }
    out.s = static_cast<double>(delta) / max;

    double h;
    if (c.r == max) {
        h = static_cast<double>(c.g - c.b) / delta;
    } else if (c.g == max) {
        h = 2.0 + static_cast<double>(c.b - c.r) / delta;
    } else {
        h = 4.0 + static_cast<double>(c.r - c.g) / delta;
    }
    h *= 60.0;
    if (h < 0.0) {
        h += 360.0;
    }
    if (h >= 360.0) {
        h -= 360.0;
    }
    out.h = h;
    return out;
}

Rgb8 hsv_to_rgb(const Hsv& c) {
    if (c.s <= 0.0) {
        const std::uint8_t g = round_channel(c.v * 255.0);
        return {g, g, g};
    }
    const double hp = c.h / 60.0; // sector position in [0, 6)
    const int sector = std::min(static_cast<int>(hp), 5);
    const double f = hp - sector;
    const double p = c.v * (1.0 - c.s);
    const double q = c.v * (1.0 - c.s * f);
    const double t = c.v * (1.0 - c.s * (1.0 - f));

    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
    switch (sector) {
    case 0: r = c.v; g = t; b = p; break;
    case 1: r = q; g = c.v; b = p; break;
    case 2: r = p; g = c.v; b = t; break;
    case 3: r = p; g = q; b = c.v; break;
    case 4: r = t; g = p; b = c.v; break;
    case 5: r = c.v; g = p; b = q; break;
    }
    return {round_channel(r * 255.0), round_channel(g * 255.0), round_channel(b * 255.0)};
}

CylPoint hsv_to_cyl(const Hsv& c) {
    const double rad = c.h * kDegToRad;
    return {c.s * std::cos(rad), c.s * std::sin(rad), c.v};
}

Hsv cyl_to_hsv(const CylPoint& p) {
    Hsv out;
    out.s = std::min(1.0, std::hypot(p.x, p.y));
    out.v = std::clamp(p.z, 0.0, 1.0);
    if (p.x == 0.0 && p.y == 0.0) {
        return out; // axis: h = 0 canonically
    }
    double h = std::atan2(p.y, p.x) * kRadToDeg;
    if (h < 0.0) {
        h += 360.0;
    }
    if (h >= 360.0) {
        h = 0.0;
    }
    out.h = (out.s == 0.0 || out.v == 0.0) ? 0.0 : h;
    return out;
}

double circular_hue_distance(double a, double b) {
    double d = std::fmod(std::fabs(a - b), 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

} // namespace huescan
