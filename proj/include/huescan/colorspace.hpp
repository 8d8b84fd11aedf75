#pragma once

#include <cmath>
#include <cstdint>

namespace huescan {

/// 8-bit RGB color, the raw pixel unit of decoded images.
struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

/// Hue-saturation-value color. Hue is in degrees over the half-open range
/// [0, 360); saturation and value are in [0, 1]. When s == 0 or v == 0 the
/// hue is canonically 0, so equal colors compare equal.
struct Hsv {
    double h = 0.0;
    double s = 0.0;
    double v = 0.0;

    friend bool operator==(const Hsv&, const Hsv&) = default;
    friend auto operator<=>(const Hsv&, const Hsv&) = default;
};

/// Cylindrical Cartesian embedding of HSV: x = s*cos(h), y = s*sin(h),
/// z = v. All clustering and distance math runs in this space; raw (h,s,v)
/// triples are never compared directly because Euclidean distance on hue is
/// wrong at the 0/360 seam.
struct CylPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const CylPoint&, const CylPoint&) = default;
};

/// Standard hexcone conversion: v = max/255, s = (max-min)/max (0 when
/// max = 0), hue from the dominant channel sector. Total function.
Hsv rgb_to_hsv(Rgb8 c);

/// Inverse hexcone conversion. Channels are rounded half away from zero so
/// reports are byte-reproducible.
Rgb8 hsv_to_rgb(const Hsv& c);

CylPoint hsv_to_cyl(const Hsv& c);

/// Inverse embedding via atan2 mapped to [0, 360). The axis x = y = 0 maps
/// to h = 0 canonically. Saturation and value are clamped to [0, 1] to
/// absorb float drift from centroid averaging.
Hsv cyl_to_hsv(const CylPoint& p);

inline double squared_distance(const CylPoint& a, const CylPoint& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

inline double distance(const CylPoint& a, const CylPoint& b) {
    return std::sqrt(squared_distance(a, b));
}

/// Circular distance between two hues in degrees, always in [0, 180].
double circular_hue_distance(double a, double b);

} // namespace huescan
